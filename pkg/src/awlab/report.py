"""Structured check results and deterministic serialization.

A CheckReport is the unit of output for every verification: an identifier, the
parameters it ran with (stringified), the residual, the tolerance, and the
verdict. Warning-class checks keep passed=True and explain themselves in notes
so they can never flip an exit code.
"""
from dataclasses import dataclass, field


@dataclass
class CheckReport:
    check_id: str
    params: dict
    residual: float
    tolerance: float
    passed: bool
    notes: str = ""
    warning: bool = False

    def to_dict(self):
        return {
            "check_id": self.check_id,
            "params": {k: str(v) for k, v in sorted(self.params.items())},
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "pass": bool(self.passed),
            "notes": self.notes,
            "warning": bool(self.warning),
        }


def check(check_id, residual, tolerance, params=None, notes="", warning=False):
    """Build a CheckReport with the standard verdict rule. Warning-class checks
    always carry passed=True; the residual is still recorded."""
    residual = float(residual)
    ok = residual <= tolerance
    if warning:
        return CheckReport(check_id, params or {}, residual, tolerance, True,
                           notes=notes or ("residual %.3e vs %.1e" % (residual, tolerance)),
                           warning=True)
    return CheckReport(check_id, params or {}, residual, tolerance, ok, notes=notes)


def _fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if x != x:
            return '"nan"'
        if x in (float("inf"), float("-inf")):
            return '"inf"' if x > 0 else '"-inf"'
        return format(x, ".17g")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, str):
        out = x.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return '"%s"' % out
    if isinstance(x, dict):
        items = ",".join('%s:%s' % (_fmt(str(k)), _fmt(v)) for k, v in x.items())
        return "{%s}" % items
    if isinstance(x, (list, tuple)):
        return "[%s]" % ",".join(_fmt(v) for v in x)
    if x is None:
        return "null"
    raise TypeError("cannot serialize %r" % (type(x),))


def dump_json(obj):
    """Deterministic JSON text; floats written with 17 significant digits so
    values round-trip exactly and repeated runs are byte-identical."""
    return _fmt(obj)
