"""Command-line entry point.

Every subcommand prints a deterministic text report.  Verdict lines have the
form ``CHECK <name> PASS|FAIL <detail>``; the exit code is 0 iff every check
passed, 1 if some check failed and 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import io
from .elements import Element
from .filtration import (
    closure,
    format_ulm_report,
    generator_height,
    height,
    length,
    ulm_invariants,
)
from .homlift import (
    Morphism,
    NotLiftable,
    RelationViolation,
    hom_count,
    hom_generators,
    hom_set,
    lift,
)
from .ordinal import OMEGA, OrdinalParseError, parse_ordinal
from .presentation import (
    LabelNotBelowBeta,
    kappa,
    p_beta,
    quotient_by_x_alpha,
    quotient_forest,
    x_alpha,
)
from .purity import (
    NotLimitOrdinal,
    ResourceLimit,
    balanced_criterion,
    canonical_presentation,
    criterion_failure,
    is_lambda_balanced,
    isotypic_failure,
    nice_failure,
)
from .realization import FiniteModule, Submodule, TooLarge, quotient


class Report:
    def __init__(self, argv):
        self.lines = ["command: " + " ".join(argv)]
        self.failed = False

    def line(self, text: str = ""):
        self.lines.append(text)

    def check(self, name: str, ok: bool, detail: str = ""):
        self.failed |= not ok
        verdict = "PASS" if ok else "FAIL"
        self.lines.append(f"CHECK {name} {verdict} {detail}".rstrip())

    def render(self) -> str:
        return "\n".join(self.lines) + "\n"


def _invariants(G: FiniteModule) -> str:
    return "[" + ",".join(str(e) for e in G.exponents) + "]"


def _render(F, G, x) -> str:
    if F is not None and F.realization is G:
        return json.dumps(Element.from_coords(F, x).terms, ensure_ascii=False, sort_keys=True)
    return "(" + ",".join(str(a) for a in x) + ")"


def _parse_lambda(text: str):
    if text in ("omega", "w"):
        return parse_ordinal("w")
    return parse_ordinal(text)


# -- subcommands ----------------------------------------------------------


def cmd_pbeta(args, rep: Report):
    beta = parse_ordinal(args.beta)
    if args.labels is not None:
        labels = [parse_ordinal(t) for t in args.labels.split(",") if t.strip()]
        P = p_beta(beta, args.p, labels)
    else:
        P = p_beta(beta, args.p)
    G = P.realization
    rep.line(f"beta: {P.beta}")
    rep.line(f"p: {P.p}")
    rep.line(f"generators: {len(P)}")
    if P.is_complete:
        rep.check("generator_count", len(P) == 2 ** int(beta), f"{len(P)} = 2^{beta}")
    if args.realize:
        rep.line(f"invariants: {_invariants(G)}")
        rep.check("order", G.log_order == len(P), f"log_p|G| = {G.log_order}")
        if P.is_complete:
            L = length(G)
            rep.check("length", int(L) == int(beta) + 1, f"length = {L}")
    if args.ulm:
        prof = ulm_invariants(G)
        rep.line(f"ulm: {prof.line()}")
        rep.line(format_ulm_report(prof, G))
        rep.check("ulm_mass", prof.mass() == G.log_order, f"{prof.mass()} = {G.log_order}")
    if args.heights:
        # a partial fragment sits inside P_beta, so its heights can only be lower
        bad = 0
        for g in P.ordered_ids():
            closed = generator_height(P, g)
            real = height(G, G.coords_of({g: 1}))
            bad += (closed != real) if P.is_complete else (real > closed)
            rep.line(f"height {g}: {closed} (realization {real})")
        if P.is_complete:
            rep.check("heights", bad == 0, f"{len(P) - bad}/{len(P)} agree")
        else:
            rep.check("heights_bound", bad == 0, f"{len(P) - bad}/{len(P)} within bound")
    if args.quotient is not None:
        alpha = parse_ordinal(args.quotient)
        xs = x_alpha(P, alpha)
        rep.line(f"X_{alpha}: {', '.join(xs)}")
        parts = quotient_by_x_alpha(P, alpha)
        for part in parts:
            k = kappa(P, part.gamma, alpha)
            rep.line(f"kappa({part.gamma},{alpha}) = {k}; roots: {', '.join(part.copy_roots())}")
        desc = " + ".join(f"P_{q.gamma}^{q.copies}" for q in parts) or "0"
        rep.line(f"P_{P.beta}/X_{alpha} = {desc}")
        Q, _ = quotient(G, Submodule(G, [G.coords_of({g: 1}) for g in xs]))
        claimed = []
        for q in parts:
            claimed += list(p_beta(q.gamma, P.p, [x for x in P.label_set if x < q.gamma]).realization.exponents) * q.copies
        claimed.sort(reverse=True)
        forest_q = quotient_forest(P, alpha).realization
        ok = list(Q.exponents) == claimed == list(forest_q.exponents)
        rep.check("quotient_invariants", ok, f"{_invariants(Q)}")


def _load_sequence(path, rep: Report):
    F, seq = io.sequence_from_json(io.load_json(path))
    rep.line(f"input: {Path(path).name} sha256:{io.digest(path)}")
    rep.line(f"B: {_invariants(seq.B)}")
    rep.line(f"N: order {seq.B.p}^{seq.N.log_order}")
    rep.line(f"C: {_invariants(seq.C)}")
    return F, seq


def _lift_survey(seq, max_beta: int, cap: int = 256):
    """Lift every morphism (or a generating set when Hom is large) for beta <= max_beta."""
    for beta in range(max_beta + 1):
        P = p_beta(beta, seq.B.p)
        if hom_count(P.realization, seq.C) <= cap:
            homs = hom_set(P, seq.C)
        else:
            homs = hom_generators(P, seq.C)
        for f in homs:
            try:
                lift(seq, f)
            except NotLiftable as exc:
                return beta, exc
    return None


def cmd_check(args, rep: Report):
    lam = _parse_lambda(args.lam)
    F, seq = _load_sequence(args.seq, rep)
    G, N = seq.B, seq.N
    rep.line(f"lambda: {lam}")
    what = args.what
    if what == "nice":
        fail = nice_failure(G, N, lam)
    elif what == "isotypic":
        fail = isotypic_failure(G, N, lam)
    elif what == "balanced":
        fail = isotypic_failure(G, N, lam) or nice_failure(G, N, lam)
    elif what == "criterion":
        fail = criterion_failure(G, N, lam)
    else:
        top = int(length(G)) + 2
        found = _lift_survey(seq, top)
        balanced = is_lambda_balanced(G, N, lam)
        rep.line(f"balanced: {balanced}")
        if found is None:
            rep.check("lifting", True, f"all morphisms from P_beta lift, beta <= {top}")
        else:
            beta, exc = found
            rep.check(
                "lifting",
                False,
                f"beta={beta} sigma={exc.sigma} element={_render(None, seq.C, exc.element)}",
            )
        return
    if fail is None:
        rep.check(what, True)
    else:
        rep.check(what, False, f"sigma={fail.sigma} witness={_render(F, G, fail.witness)}")


def cmd_lift(args, rep: Report):
    F, seq = _load_sequence(args.seq, rep)
    source, target, images = io.morphism_from_json(io.load_json(args.hom))
    rep.line(f"morphism: {Path(args.hom).name} sha256:{io.digest(args.hom)}")
    if target.parents != F.parents:
        raise io.SchemaError("morphism target must be the middle module B of the sequence")
    pi = seq.pi
    f = Morphism(source, seq.C, {g: pi(x.coords) for g, x in images.items()})
    try:
        out = lift(seq, f)
    except NotLiftable as exc:
        rep.line(
            f"OBSTRUCTION sigma={exc.sigma} generator={exc.generator} "
            f"element={_render(None, seq.C, exc.element)}"
        )
        rep.check("lift", False, f"sigma={exc.sigma}")
        return
    doc = io.morphism_to_json(out, F)
    rep.line("lifted: " + json.dumps(doc["images"], ensure_ascii=False, sort_keys=True))
    if args.out:
        Path(args.out).write_text(json.dumps(doc, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    rep.check("lift", True, "pi o f' = f")


def cmd_canonical(args, rep: Report):
    cp = canonical_presentation(args.n, args.p, allow_large=args.allow_large)
    rep.line(cp.summary())
    for beta in sorted(cp.hom_counts):
        rep.line(f"|Hom(P_{beta},P_{args.n})| = {cp.hom_counts[beta]} (enumerated {cp.enumerated[beta]})")
    T, K = cp.seq.B, cp.K
    rep.line(f"T: {_invariants(T)}")
    rep.line(f"K: order {T.p}^{K.log_order}")
    rep.check("hom_counts", cp.hom_counts == cp.enumerated)
    rep.check("surjective", cp.surjective)
    rep.check("balanced", is_lambda_balanced(T, K, OMEGA))
    rep.check("criterion", balanced_criterion(T, K, OMEGA))
    rep.check("closure", closure(T, K, OMEGA) == K)
    if args.out:
        doc = io.sequence_to_json(cp.T, K)
        Path(args.out).write_text(json.dumps(doc, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")


def cmd_oracle(args, rep: Report):
    F = io.module_from_json(io.load_json(args.module))
    rep.line(f"input: {Path(args.module).name} sha256:{io.digest(args.module)}")
    rep.line(f"seed: {args.seed}")
    G = F.realization
    rng = random.Random(args.seed)
    ids = F.ordered_ids()
    top = G.p ** (G.E + 1)
    agree = 0
    for _ in range(args.trials):
        x = Element(F, {g: rng.randrange(top) for g in rng.sample(ids, rng.randint(1, len(ids)))})
        y = Element(F, {g: rng.randrange(top) for g in rng.sample(ids, rng.randint(1, len(ids)))})
        c = rng.randrange(-top, top)
        ok = (x + y).coords == G.add(x.coords, y.coords)
        ok &= x.scalar_mul(c).coords == G.scale(c, x.coords)
        agree += ok
    rep.line(f"{agree}/{args.trials} agree")
    rep.check("oracle", agree == args.trials, f"{agree}/{args.trials}")


# -- entry point ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="walker", description="Walker modules and balanced sequences.")
    ap.add_argument("--time", action="store_true", help="print elapsed time to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("pbeta", help="construct P_beta and report invariants")
    s.add_argument("--beta", required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--labels", help="comma-separated label set (required for infinite beta)")
    s.add_argument("--realize", action="store_true")
    s.add_argument("--ulm", action="store_true")
    s.add_argument("--heights", action="store_true")
    s.add_argument("--quotient", metavar="ALPHA")
    s.set_defaults(func=cmd_pbeta)

    s = sub.add_parser("check", help="test a submodule for niceness, balancedness, lifting")
    s.add_argument("seq")
    s.add_argument("--what", choices=["nice", "isotypic", "balanced", "criterion", "lifting"], required=True)
    s.add_argument("--lambda", dest="lam", default="w")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("lift", help="lift a morphism P_beta -> B/N to B")
    s.add_argument("seq")
    s.add_argument("hom")
    s.add_argument("--out")
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("canonical", help="build the canonical balanced presentation of P_n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--allow-large", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_canonical)

    s = sub.add_parser("oracle", help="normal-form arithmetic against coordinates")
    s.add_argument("--module", required=True)
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    rep = Report(["walker"] + argv)
    start = time.perf_counter()
    try:
        args.func(args, rep)
    except NotLimitOrdinal as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OrdinalParseError, io.SchemaError, LabelNotBelowBeta, RelationViolation, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ResourceLimit, TooLarge) as exc:
        print(f"error: resource limit: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(rep.render())
    if args.time:
        print(f"elapsed: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return 1 if rep.failed else 0


if __name__ == "__main__":
    sys.exit(main())
