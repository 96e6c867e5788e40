"""Directory of canonical JSON objects with a content-hash manifest."""

import hashlib
import json
import os

from .serialize import dumps

KINDS = ("algebra", "module", "twc", "action", "report")


class WorkspaceError(ValueError):
    pass


def kind_of(path):
    base = os.path.basename(path)
    for k in KINDS:
        if base.endswith("." + k + ".json"):
            return k
    raise WorkspaceError("cannot tell object kind from file name %r "
                         "(expected *.algebra.json, *.module.json, *.twc.json, *.action.json)" % base)


def digest(text):
    return hashlib.sha256(text.encode()).hexdigest()


def validate_data(kind, data):
    """Rebuild the object and run its exact checks; returns (object, errors)."""
    from .zigzag import ZigzagAlgebra
    from .modules_core import AInfModule, validate_module, realize
    from .twisted import TwistedComplex
    if kind == "algebra":
        obj = ZigzagAlgebra.from_json(data)
        return obj, obj.validate()
    if kind == "module":
        obj = AInfModule.from_json(data)
        return obj, validate_module(obj)
    if kind == "twc":
        obj = TwistedComplex.from_json(data)
        errs = obj.check()
        if not errs:
            errs = validate_module(realize(obj))
        return obj, errs
    if kind == "action":
        from .equivariance import HomotopyAction, literal_check
        obj = HomotopyAction.from_json(data)
        errs = obj.C.check()
        if not errs:
            errs = ["cocycle fails at %s" % (f,) for f in literal_check(obj)]
        return obj, errs
    return data, []


def load_object(path):
    kind = kind_of(path)
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise WorkspaceError("%s: not JSON (%s)" % (path, exc))
    obj, errs = validate_data(kind, data)
    return kind, obj, errs


class Workspace:
    def __init__(self, root):
        self.root = root
        self.manifest_path = os.path.join(root, "manifest.json")
        os.makedirs(root, exist_ok=True)
        if os.path.exists(self.manifest_path):
            with open(self.manifest_path) as fh:
                self.manifest = json.load(fh)
        else:
            self.manifest = {"objects": {}}

    def path(self, name):
        return os.path.join(self.root, name)

    def save(self, name, data):
        text = dumps(data) + "\n"
        with open(self.path(name), "w") as fh:
            fh.write(text)
        self.manifest["objects"][name] = digest(text)
        self._flush()
        return self.path(name)

    def _flush(self):
        with open(self.manifest_path, "w") as fh:
            fh.write(dumps(self.manifest) + "\n")

    def verify(self, name):
        """Hash check plus revalidation of one stored object."""
        want = self.manifest["objects"].get(name)
        if want is None:
            raise WorkspaceError("%s is not in the manifest" % name)
        with open(self.path(name)) as fh:
            text = fh.read()
        if digest(text) != want:
            return ["content hash mismatch"]
        return load_object(self.path(name))[2]

    def names(self, kind=None):
        return sorted(n for n in self.manifest["objects"] if kind is None or kind_of(n) == kind)

    def reports(self):
        out = []
        for n in self.names("report"):
            with open(self.path(n)) as fh:
                out.append((n, json.load(fh)))
        return out
