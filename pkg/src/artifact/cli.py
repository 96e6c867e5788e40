"""Command line entry point: `artifact <command> ...`.

Exit codes: 0 pass, 1 check failure, 2 input error, 3 budget exhaustion.
Failures print a JSON error object on stdout.
"""

import csv
import functools
import io
import json
import os
import re
import sys

import click

from .exact_core import q
from .serialize import canon, dumps
from .workspace import Workspace, WorkspaceError, kind_of, load_object

PASS, FAIL, INPUT, BUDGET = 0, 1, 2, 3


def _error_code(exc):
    from .equivariance import WindowExhausted, EquivarianceError
    from .exact_core import ExactnessError, ShapeError
    from .zigzag import AlgebraError
    from .modules_core import ModuleError
    from .twisted import ComplexError
    from .hochschild import HochschildError
    if isinstance(exc, WindowExhausted):
        return BUDGET
    if isinstance(exc, EquivarianceError):
        return FAIL
    if isinstance(exc, (AlgebraError, ModuleError, ComplexError, WorkspaceError, ExactnessError,
                        ShapeError, OSError, json.JSONDecodeError, click.ClickException)):
        return INPUT
    if isinstance(exc, HochschildError):
        return FAIL
    return None


def error_object(exc, code):
    return {"error": {"type": type(exc).__name__, "message": str(exc), "exit_code": code}}


def emit(obj):
    click.echo(dumps(obj))


def guarded(fn):
    """Turn library exceptions into a JSON error object plus exit code."""
    @functools.wraps(fn)
    def wrapper(*args, **kw):
        try:
            code = fn(*args, **kw)
        except click.exceptions.Exit:
            raise
        except Exception as exc:
            code = _error_code(exc)
            if code is None:
                raise
            emit(error_object(exc, code))
        raise click.exceptions.Exit(code or 0)
    return wrapper


def _workspace(ctx):
    root = ctx.obj.get("workspace")
    return Workspace(root) if root else None


def _store_report(ctx, name, report):
    ws = _workspace(ctx)
    if ws is not None:
        slug = re.sub(r"[^A-Za-z0-9_.-]+", "_", name).strip("_")
        ws.save(slug + ".report.json", report)


def _save_object(ctx, name, data, out):
    """Write to --out, else into the workspace, else nowhere; returns the path."""
    if out:
        from .serialize import dump_json
        kind_of(out)
        dump_json(data, out)
        return out
    ws = _workspace(ctx)
    if ws is not None:
        return ws.save(name, data)
    return None


def _load(path, want):
    kind, obj, errs = load_object(path)
    if kind not in want:
        raise WorkspaceError("%s holds a %s, expected %s" % (path, kind, " or ".join(want)))
    if errs:
        raise WorkspaceError("%s fails validation: %s" % (path, "; ".join(errs[:5])))
    return obj


_PROJ = re.compile(r"^P_?(\d+)(?:\{(-?\d+)\})?(?:\[(-?\d+)\])?$")


def complex_arg(spec, m, n):
    """A *.twc.json file or a projective written P2, P_2, P2{i}[j]."""
    from .zigzag import zigzag
    from .twisted import projective
    hit = _PROJ.match(spec.strip())
    if hit:
        k = int(hit.group(1))
        alg = zigzag(m, n)
        if not 1 <= k <= m:
            raise WorkspaceError("vertex %d out of range 1..%d" % (k, m))
        return projective(alg, k, int(hit.group(2) or 0), int(hit.group(3) or 0))
    return _load(spec, ("twc",))


def target_predicate(spec, alg):
    """Orbit targets: Pk (any shift), Pk{i}[j] (exact), ext:Pk=N, or a *.twc.json file."""
    from .twisted import is_shifted_projective, ext_total, projective
    s = spec.strip()
    hit = _PROJ.match(s)
    if hit:
        k = int(hit.group(1))
        if hit.group(2) is None and hit.group(3) is None:
            return lambda C: is_shifted_projective(C, k)
        gen = (k, int(hit.group(2) or 0), int(hit.group(3) or 0))
        return lambda C: C.gens == [gen] and not C.delta
    hit = re.match(r"^ext:P_?(\d+)=(\d+)$", s)
    if hit:
        P = projective(alg, int(hit.group(1)))
        want = int(hit.group(2))
        return lambda C: ext_total(C, P) == want
    return _load(s, ("twc",))


@click.group()
@click.option("--workspace", type=click.Path(file_okay=False), default=None,
              help="Directory for objects, reports and the hash manifest.")
@click.pass_context
def cli(ctx, workspace):
    """Exact computations over the zigzag algebras A_m^n."""
    ctx.ensure_object(dict)
    ctx.obj["workspace"] = workspace


@cli.group()
def algebra():
    """Zigzag algebra files."""


@algebra.command("new")
@click.option("--m", type=int, required=True)
@click.option("--n", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
@guarded
def algebra_new(ctx, m, n, out):
    from .zigzag import zigzag
    alg = zigzag(m, n)
    errs = alg.validate()
    name = "A%d_%d.algebra.json" % (m, n)
    if out is None and _workspace(ctx) is None:
        out = name
    path = _save_object(ctx, name, alg.to_json(), out)
    report = {"command": "algebra new", "m": m, "n": n, "dim": alg.dim(), "path": path,
              "errors": errs, "ok": not errs}
    _store_report(ctx, "algebra-%d-%d" % (m, n), report)
    emit(report)
    return PASS if not errs else FAIL


@cli.group()
def module():
    """Module and complex files."""


@module.command("validate")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
@guarded
def module_validate(ctx, file):
    kind, obj, errs = load_object(file)
    report = {"command": "module validate", "file": file, "kind": kind, "errors": errs,
              "ok": not errs}
    emit(report)
    return PASS if not errs else FAIL


@cli.command("ext")
@click.argument("c0")
@click.argument("c1")
@click.option("--m", type=int, default=2, help="For P_k arguments.")
@click.option("--n", type=int, default=2, help="For P_k arguments.")
@click.pass_context
@guarded
def ext_cmd(ctx, c0, c1, m, n):
    """Dimensions of H(hom(C0, C1)) by (internal, cohomological) degree."""
    from .twisted import ext_table
    C0, C1 = complex_arg(c0, m, n), complex_arg(c1, m, n)
    if (C0.alg.m, C0.alg.n) != (C1.alg.m, C1.alg.n):
        raise WorkspaceError("complexes live over different algebras")
    table, total = ext_table(C0, C1)
    report = {"command": "ext", "table": [{"i": w, "j": h, "dim": d}
                                         for (w, h), d in sorted(table.items()) if d],
              "total": {str(t): d for t, d in sorted(total.items())}, "ok": True}
    emit(report)
    return PASS


@cli.command("twist")
@click.option("--word", required=True, help='Braid word such as "1 2 -1"; rightmost acts first.')
@click.argument("c")
@click.option("--m", type=int, default=2)
@click.option("--n", type=int, default=2)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
@guarded
def twist_cmd(ctx, word, c, m, n, out):
    """Apply a braid word, reducing after each letter."""
    from .twisted import apply_braid
    C = apply_braid(word, complex_arg(c, m, n))
    errs = C.check()
    data = C.to_json()
    slug = re.sub(r"\s+", "_", word.strip())
    path = _save_object(ctx, "twist_%s.twc.json" % slug, data, out)
    if path is None:
        emit(data)
    else:
        emit({"command": "twist", "path": path, "generators": len(C.gens), "ok": not errs})
    return PASS if not errs else FAIL


@cli.command("central-shift")
@click.option("--m", type=int, required=True)
@click.option("--n", type=int, required=True)
@click.option("--power", type=int, default=2, help="Power of the Garside element.")
@click.pass_context
@guarded
def central_shift_cmd(ctx, m, n, power):
    """Reduced image of each P_k under delta^power against a single shifted generator."""
    from .zigzag import zigzag
    from .twisted import central_shift_check
    rows = central_shift_check(zigzag(m, n), power)
    ok = all(r["pass"] for r in rows)
    _, i, j = rows[0]["expected"]
    ks = ",".join(str(r["k"]) for r in rows)
    click.echo("P_k → P_k[%d]{%d} for k=%s: %s" % (j, i, ks, "PASS" if ok else "FAIL"))
    for r in rows:
        if not r["pass"]:
            click.echo("  P_%d → %s" % (r["k"], r["observed"]))
    _store_report(ctx, "central-shift-%d-%d-%d" % (m, n, power),
                  {"command": "central-shift", "m": m, "n": n, "rows": rows, "ok": ok})
    return PASS if ok else FAIL


@cli.command("braid-relations")
@click.option("--m", type=int, required=True)
@click.option("--n", type=int, required=True)
@click.option("--seed", type=int, default=0)
@click.pass_context
@guarded
def braid_relations_cmd(ctx, m, n, seed):
    from .zigzag import zigzag
    from .twisted import braid_relations_check
    rows = braid_relations_check(zigzag(m, n), seed)
    ok = all(r["pass"] for r in rows)
    report = {"command": "braid-relations", "m": m, "n": n, "rows": rows, "ok": ok}
    _store_report(ctx, "braid-relations-%d-%d" % (m, n), report)
    emit(report)
    return PASS if ok else FAIL


CARDY_FIELDS = ["m", "n", "word0", "start0", "word1", "start1", "euler", "gram_product", "result"]


def cardy_csv(rows):
    buf = io.StringIO()
    w = csv.DictWriter(buf, CARDY_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        row = {k: r[k] for k in CARDY_FIELDS[:-1]}
        row["result"] = "PASS" if r["pass"] else "FAIL"
        w.writerow(row)
    return buf.getvalue()


@cli.command("cardy")
@click.option("--corpus", "size", type=int, required=True)
@click.option("--seed", type=int, required=True)
@click.option("--max-m", type=int, default=3)
@click.option("--ns", default="2,3", help="Comma separated values of n.")
@click.option("--max-len", type=int, default=4)
@click.option("--jobs", type=int, default=1)
@click.pass_context
@guarded
def cardy_cmd(ctx, size, seed, max_m, ns, max_len, jobs):
    """Euler form against the Gram pairing of K-classes, one CSV row per pair."""
    from .hochschild import cardy_corpus
    try:
        nvals = tuple(int(x) for x in ns.split(","))
    except ValueError:
        raise click.BadParameter("--ns must be integers separated by commas")
    rows = cardy_corpus(size, seed, tuple(range(1, max_m + 1)), nvals, max_len, jobs=jobs)
    click.echo(cardy_csv(rows), nl=False)
    ok = all(r["pass"] for r in rows)
    _store_report(ctx, "cardy-%d-%d" % (size, seed),
                  {"command": "cardy", "size": size, "seed": seed,
                   "passed": sum(r["pass"] for r in rows), "ok": ok})
    return PASS if ok else FAIL


@cli.group()
def hh():
    """Hochschild classes."""


@hh.command("class")
@click.argument("c")
@click.option("--m", type=int, default=2)
@click.option("--n", type=int, default=2)
@click.pass_context
@guarded
def hh_class(ctx, c, m, n):
    """Fundamental class of C in the basis [e_k], compared with its K-class."""
    from .hochschild import alg_class
    C = complex_arg(c, m, n)
    cls = alg_class(C)
    k = C.k_class()
    cls = [int(x) if q(x).denominator == 1 else q(x) for x in cls]
    report = {"command": "hh class", "alg_class": cls, "k_class": list(k),
              "ok": list(cls) == list(k)}
    emit(report)
    return PASS if report["ok"] else FAIL


@cli.command("orbit")
@click.option("--start", required=True, help="P_k or a *.twc.json file.")
@click.option("--target", required=True, help="Pk, Pk{i}[j], ext:Pk=N or a *.twc.json file.")
@click.option("--depth", type=int, required=True)
@click.option("--m", type=int, default=2)
@click.option("--n", type=int, default=2)
@click.option("--jobs", type=int, default=1)
@click.pass_context
@guarded
def orbit_cmd(ctx, start, target, depth, m, n, jobs):
    """Breadth-first braid word search; exit 3 when the depth budget runs out."""
    from .twisted import orbit_search
    S = complex_arg(start, m, n)
    res = orbit_search(S, target_predicate(target, S.alg), depth, jobs=jobs)
    report = dict(res.to_json(), command="orbit", start=start, target=target, depth=depth,
                  ok=res.word is not None)
    _store_report(ctx, "orbit-%s-%s-%d" % (start, target, depth), report)
    emit(report)
    if res.word is not None:
        return PASS
    return BUDGET if res.exhausted else FAIL


@cli.group()
def equivariant():
    """C*-equivariance pipeline."""


@equivariant.command("run")
@click.argument("c")
@click.option("--m", type=int, default=2)
@click.option("--n", type=int, default=2)
@click.option("--samples", type=int, default=20)
@click.option("--seed", type=int, default=0)
@click.option("--budget", type=int, default=40000, help="Basis budget for the strictification.")
@click.option("--no-strictify", is_flag=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the homotopy action (*.action.json).")
@click.pass_context
@guarded
def equivariant_run(ctx, c, m, n, samples, seed, budget, no_strictify, out):
    """Killing class, weak action, homotopy action, weights and strictification."""
    from .twisted import reduce
    from .equivariance import run_pipeline
    C = reduce(complex_arg(c, m, n))
    lift = C if C.bigraded else None
    Cc = C.collapse() if C.bigraded else C
    report, act = run_pipeline(Cc, lift, ref=c, samples=samples, seed=seed,
                               strictify_budget=budget, with_strictification=not no_strictify)
    report["command"] = "equivariant run"
    if act is not None:
        base = os.path.basename(c)
        if base.endswith(".twc.json"):
            base = base[:-len(".twc.json")]
        name = re.sub(r"[^A-Za-z0-9_-]+", "_", base).strip("_")
        path = _save_object(ctx, name + ".action.json", act.to_json(), out)
        if path:
            report["action_path"] = path
        _store_report(ctx, "equivariant-%s" % name, report)
    else:
        _store_report(ctx, "equivariant-%s" % re.sub(r"[^A-Za-z0-9_-]+", "_", c), report)
    emit(report)
    return PASS if report["ok"] else FAIL


@cli.command("report")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.pass_context
@guarded
def report_cmd(ctx, fmt):
    """Summarize stored reports after rechecking every manifest entry."""
    ws = _workspace(ctx)
    if ws is None:
        raise WorkspaceError("report needs --workspace")
    rows = []
    for name in ws.names():
        errs = ws.verify(name)
        row = {"name": name, "kind": kind_of(name), "valid": not errs}
        if row["kind"] == "report":
            with open(ws.path(name)) as fh:
                data = json.load(fh)
            row["command"] = data.get("command", "")
            row["ok"] = bool(data.get("ok"))
        else:
            row["command"] = ""
            row["ok"] = not errs
        rows.append(row)
    ok = all(r["ok"] and r["valid"] for r in rows)
    if fmt == "json":
        emit({"objects": rows, "ok": ok})
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, ["name", "kind", "command", "valid", "ok"], lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(canon(r))
        click.echo(buf.getvalue(), nl=False)
    return PASS if ok else FAIL


def main(argv=None):
    try:
        rv = cli.main(args=argv, prog_name="artifact", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        emit(error_object(exc, INPUT))
        return INPUT
    except click.exceptions.Abort:
        return INPUT
    return rv or 0


def entry():
    sys.exit(main())
