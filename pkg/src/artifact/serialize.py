"""Canonical JSON: sorted keys, rationals as "p/q" strings."""

from fractions import Fraction
import json


def canon(obj):
    if isinstance(obj, Fraction):
        if obj.denominator == 1:
            return str(obj.numerator)
        return "%d/%d" % (obj.numerator, obj.denominator)
    if isinstance(obj, dict):
        return {str(k): canon(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canon(v) for v in obj]
    return obj


def dumps(obj):
    return json.dumps(canon(obj), sort_keys=True, indent=1)


def dump_json(obj, path):
    with open(path, "w") as fh:
        fh.write(dumps(obj))
        fh.write("\n")
