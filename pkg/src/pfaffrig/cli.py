"""Command line interface: pfaffrig <command> [options]."""

import argparse
import json
import os
import sys
from fractions import Fraction

from sympy import isprime

from . import exclusion as ex
from .geometry import BasketMismatch, NotQuasiSmooth, basket
from .hilbert import anticanonical_degree, hilbert_numerator, series_expand
from .ideal import DEFAULT_BUDGET
from .pfaffian import PAIRS, FamilySpec, SyzygyMatrix, compute_pfaffians, family_catalog, get_family
from .wpoly import ParseError, WeightSystem, parse_and_grade

PRIME_ENV = "PFAFFRIG_PRIME"
ENTRY_KEYS = ["m%d%d" % k for k in PAIRS]


class SpecFileError(ValueError):
    pass


class RunConfig:
    def __init__(self, seed=1, prime=None, budget=DEFAULT_BUDGET, out=None, verbose=False):
        source = "flag"
        if prime is None:
            env = os.environ.get(PRIME_ENV)
            prime, source = (int(env), "env:" + PRIME_ENV) if env else (ex.DEFAULT_PRIME, "default")
        if not isprime(prime) or prime <= 7:
            raise ValueError("prime must be a prime larger than 7, got %d" % prime)
        if budget <= 0:
            raise ValueError("budget must be positive")
        self.seed = seed
        self.prime = prime
        self.prime_source = source
        self.budget = budget
        self.out = out
        self.verbose = verbose

    def metadata(self):
        return {"seed": self.seed, "prime": self.prime, "prime_source": self.prime_source, "budget": self.budget}


# ------------------------------------------------------------ spec files

def _ints(text, lineno, key):
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise SpecFileError("line %d: %s must be a list of integers" % (lineno, key)) from None


def parse_spec_text(text):
    """Returns (FamilySpec, SyzygyMatrix or None, prime or None)."""
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise SpecFileError("line %d: expected 'key: value'" % lineno)
        key, value = (s.strip() for s in line.split(":", 1))
        if key in fields:
            raise SpecFileError("line %d: duplicate field %r" % (lineno, key))
        fields[key] = (value, lineno)
    if "id" not in fields:
        raise SpecFileError("missing field 'id'")
    fid = fields["id"][0]
    p = None
    if "coefficient_field" in fields:
        v, ln = fields["coefficient_field"]
        s = v.replace(" ", "")
        if s.startswith("GF(") and s.endswith(")"):
            p = int(s[3:-1])
        elif s in ("QQ", "Q"):
            p = 0
        else:
            raise SpecFileError("line %d: coefficient_field must be GF(p) or QQ" % ln)
    catalog = None
    try:
        catalog = get_family(fid)
    except KeyError:
        pass
    if "weights" in fields:
        v, ln = fields["weights"]
        weights = _ints(v, ln, "weights")
        if len(weights) != 7:
            raise SpecFileError("line %d: seven weights expected" % ln)
        names = fields["names"][0].split() if "names" in fields else (
            list(catalog.space.names) if catalog else ["x%d" % i for i in range(7)])
        space = WeightSystem(weights, names)
    elif catalog is not None:
        space = catalog.space
    else:
        raise SpecFileError("unknown id %r and no weights given" % fid)
    if "entry_degrees" in fields:
        v, ln = fields["entry_degrees"]
        degs = _ints(v, ln, "entry_degrees")
        if len(degs) != 10:
            raise SpecFileError("line %d: ten entry degrees expected (m12 m13 m14 m15 m23 m24 m25 m34 m35 m45)" % ln)
        entry_degrees = dict(zip(PAIRS, degs))
    elif catalog is not None:
        entry_degrees = dict(catalog.entry_degrees)
    else:
        raise SpecFileError("entry_degrees required for a family outside the catalog")
    if catalog is not None and tuple(space.weights) == tuple(catalog.space.weights) \
            and entry_degrees == catalog.entry_degrees:
        spec = catalog
        space = catalog.space
    else:
        try:
            h = hilbert_numerator(list(_pf_degrees(entry_degrees)), space.weights)
            spec = FamilySpec(fid, space, entry_degrees, anticanonical_degree(h), {}, [])
        except ValueError as exc:
            raise SpecFileError("inconsistent degrees: %s" % exc) from None
    present = [k for k in ENTRY_KEYS if k in fields]
    if not present:
        return spec, None, p
    if len(present) != 10:
        missing = [k for k in ENTRY_KEYS if k not in fields]
        raise SpecFileError("entries incomplete: missing %s" % ", ".join(missing))
    if p is None:
        raise SpecFileError("explicit entries need a coefficient_field")
    entries = {}
    for key, pair in zip(ENTRY_KEYS, PAIRS):
        v, ln = fields[key]
        try:
            f = parse_and_grade(v, space, p)
        except ParseError as exc:
            raise SpecFileError("line %d: %s" % (ln, exc)) from None
        if f.terms and f.degree != entry_degrees[pair]:
            raise SpecFileError("line %d: %s has degree %s, expected %d"
                                % (ln, key, f.degree, entry_degrees[pair]))
        entries[pair] = f
    try:
        M = SyzygyMatrix(space, entries, entry_degrees, p)
    except ValueError as exc:
        raise SpecFileError(str(exc)) from None
    return spec, M, p


def _pf_degrees(entry_degrees):
    from .pfaffian import pfaffian_degrees
    return pfaffian_degrees(entry_degrees)


def load_spec(path):
    with open(path) as fh:
        return parse_spec_text(fh.read())


def member_to_text(spec, M):
    lines = ["id: %s" % spec.id,
             "weights: %s" % " ".join(map(str, spec.space.weights)),
             "names: %s" % " ".join(spec.space.names),
             "entry_degrees: %s" % " ".join(str(M.entry_degrees[k]) for k in PAIRS),
             "coefficient_field: %s" % ("GF(%d)" % M.p if M.p else "QQ")]
    for key, pair in zip(ENTRY_KEYS, PAIRS):
        lines.append("%s: %s" % (key, M.entries[pair]))
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------- commands

def _family_and_member(args, cfg):
    if args.member:
        spec, M, p = load_spec(args.member)
        if M is not None:
            if p and p != cfg.prime:
                cfg.prime, cfg.prime_source = p, "member file"
            return spec, ex.Member(spec, 0, M.p, "file", M=M, budget=cfg.budget)
        return spec, None
    return get_family(args.family), None


def _member(spec, mem, cfg):
    return mem or ex.select_member(spec, cfg.seed, cfg.prime, cfg.budget)


def _emit(text, cfg):
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_catalog(args, cfg):
    for spec in family_catalog():
        row = ", ".join("%s%s: %s" % (c.label, "" if c.multiplicity == 1 else " x%d" % c.multiplicity, c.verdict)
                        for c in spec.centres)
        extra = ""
        if spec.type_II1:
            r, a = spec.type_II1
            extra = "  Type II_1 centre 1/%d(1,%d,%d) (asserted)" % (r, a, r - a)
        print("%-6s P(%s)  A^3 = %s  %s  [%s]%s" % (spec.id, ",".join(map(str, spec.space.weights)),
                                                 ex.frac_str(spec.A3), "rigid" if spec.rigid else "non-rigid",
                                                 row, extra))
    return 0


def cmd_degree(args, cfg):
    spec, _mem = _family_and_member(args, cfg)
    A3 = anticanonical_degree(hilbert_numerator(spec))
    print(A3 if A3.denominator != 1 else "%d" % A3.numerator)
    return 0


def cmd_basket(args, cfg):
    spec, mem = _family_and_member(args, cfg)
    from .pfaffian import sample_member
    X = mem.X if mem else compute_pfaffians(sample_member(spec, cfg.seed, cfg.prime))
    try:
        b = basket(X, expected=spec.basket or None, budget=cfg.budget)
    except (BasketMismatch, NotQuasiSmooth) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    print("; ".join(b.labels()))
    return 0


def cmd_pfaffians(args, cfg):
    spec, mem = _family_and_member(args, cfg)
    from .pfaffian import sample_member
    M = mem.M if mem else sample_member(spec, cfg.seed, cfg.prime)
    if args.emit_member:
        with open(args.emit_member, "w") as fh:
            fh.write(member_to_text(spec, M))
    text = "".join("F%d = %s\n" % (i, f) for i, f in enumerate(compute_pfaffians(M), 1))
    _emit(text, cfg)
    return 0


def cmd_hilbert(args, cfg):
    spec, _mem = _family_and_member(args, cfg)
    print(" ".join(map(str, series_expand(hilbert_numerator(spec), args.terms))))
    return 0


def _inconclusive_status(certs, allow):
    bad = [c for c in certs if c.verdict == ex.INCONCLUSIVE]
    for c in bad:
        print("warning: %s %s inconclusive%s" % (c.family, c.centre,
                                                  ": " + c.payload["error"] if "error" in c.payload else ""),
              file=sys.stderr)
    return 0 if (not bad or allow) else 1


def cmd_exclude(args, cfg):
    spec, mem = _family_and_member(args, cfg)
    if not args.centre:
        print("error: --centre is required", file=sys.stderr)
        return 2
    r, a, k = ex.parse_centre(spec, args.centre)
    member = _member(spec, mem, cfg)
    cert = ex.certify_centre(spec, member, r, a, k, cfg.budget)
    _emit(ex.certificates_to_json([cert], cfg.metadata()), cfg)
    return _inconclusive_status([cert], args.allow_inconclusive)


def cmd_gencond(args, cfg):
    cid = args.condition
    if cid not in ex.CONDITION_CENTRES:
        print("error: unknown condition %r" % cid, file=sys.stderr)
        return 2
    fid = ex.CONDITION_CENTRES[cid][0]
    if args.member:
        spec, mem = _family_and_member(args, cfg)
        if mem is None:
            print("error: member file has no explicit entries", file=sys.stderr)
            return 2
    else:
        spec, mem = get_family(fid), None
    member = _member(spec, mem, cfg)
    res = ex.check_generality_condition(cid, member, args.index, cfg.budget, zero=True if args.zero_named else None)
    doc = res.to_dict()
    doc["metadata"].update(ex._enc(cfg.metadata()))
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", cfg)
    return 0 if res.passed else 1


def cmd_verify_table(args, cfg):
    all_certs = []
    status = 0
    for spec in family_catalog():
        certs = ex.certify_family(spec, cfg.seed, cfg.prime, cfg.budget)
        all_certs += certs
        got = ex.family_verdicts(certs)
        want = ex.expected_verdicts(spec)
        side = [c for c in certs if c.centre in ("curves", "nonsingular points")]
        ok = got == want and all(c.verdict == ex.EXCLUDED for c in side)
        print("%s: %s" % (spec.id, "match" if ok else "MISMATCH"))
        for label in want:
            print("  %-12s expected %-9s got %s" % (label, want[label], got.get(label)))
        for c in side:
            print("  %-12s %s" % (c.centre, c.verdict))
        if not ok:
            status = 1
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(ex.certificates_to_json(all_certs, cfg.metadata()))
    print("prime %d (%s), seed %d" % (cfg.prime, cfg.prime_source, cfg.seed))
    if status == 0 and _inconclusive_status(all_certs, args.allow_inconclusive):
        status = 1
    return status


COMMANDS = {"catalog": cmd_catalog, "degree": cmd_degree, "basket": cmd_basket, "pfaffians": cmd_pfaffians,
            "hilbert": cmd_hilbert, "exclude": cmd_exclude, "gencond": cmd_gencond,
            "verify-table": cmd_verify_table}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--prime", type=int, default=None)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--member", help="family/member file")
    common.add_argument("--out", help="write output to this path")
    common.add_argument("--allow-inconclusive", action="store_true")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="pfaffrig", description="Verify rigidity certificates of Pfaffian Fano 3-folds")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("catalog", parents=[common])
    for name in ("degree", "basket", "hilbert"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("family", nargs="?", default=None)
        if name == "hilbert":
            sp.add_argument("--terms", type=int, default=20)
    sp = sub.add_parser("pfaffians", parents=[common])
    sp.add_argument("family", nargs="?", default=None)
    sp.add_argument("--emit-member", help="also write the member as a spec file")
    sp = sub.add_parser("exclude", parents=[common])
    sp.add_argument("family", nargs="?", default=None)
    sp.add_argument("--centre", help='centre id such as "5/(1,2,3)#1"')
    sp = sub.add_parser("gencond", parents=[common])
    sp.add_argument("condition")
    sp.add_argument("--index", type=int, default=1, help="which point of the type")
    sp.add_argument("--zero-named", action="store_true", help="zero the coefficient the condition names")
    sub.add_parser("verify-table", parents=[common])
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.seed, args.prime, args.budget, args.out, args.verbose)
        if getattr(args, "family", "x") is None and not args.member:
            print("error: a family id or --member file is required", file=sys.stderr)
            return 2
        return COMMANDS[args.command](args, cfg)
    except (SpecFileError, ValueError, KeyError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
