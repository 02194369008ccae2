"""Command-line interface.

Data go to the ``--out`` file when one is given (a short summary is printed);
otherwise the JSON document is written to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bounds, constructions, jsonio
from .errors import (
    AmbiguousOutcomes,
    BadParams,
    DimensionMismatch,
    DimensionTooLarge,
    EmptySupport,
    InconsistentOutcomes,
    IndexOutOfRange,
    NegativeProbability,
    NotAPovm,
    NotPrime,
    NotPSD,
    NotRank1,
    SingularOperator,
    TomographyError,
    UnknownFamily,
)
from .povm import OperatorSet, outcome_vector, rank1_convert
from .states import fidelity, haar_random
from .tomography import (
    BornOracle,
    SampledOracle,
    adaptive_reconstruct,
    reconstruct_d3,
    reconstruct_d3_converted,
    sample_frequencies,
)
from .verify import FAIL, PASS, sampled_distinguishability

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3
EXIT_IO = 30

# Checked in order; subclasses before their bases.
EXIT_CODES = [
    (DimensionMismatch, 10),
    (NotAPovm, 11),
    (InconsistentOutcomes, 12),
    (AmbiguousOutcomes, 13),
    (NegativeProbability, 14),
    (EmptySupport, 15),
    (SingularOperator, 16),
    (NotRank1, 17),
    (NotPSD, 18),
    (UnknownFamily, 19),
    (BadParams, 20),
    (NotPrime, 21),
    (DimensionTooLarge, 22),
    (IndexOutOfRange, 23),
    (TomographyError, 24),
]

FAMILIES = ("sic-d2", "mubs-d2", "mubs-prime", "eight-d3", "counterexample-d2", "theorem2")
ROUNDTRIP_TOL = 1e-9


def exit_code_for(exc: BaseException) -> int:
    for cls, code in EXIT_CODES:
        if isinstance(exc, cls):
            return code
    return EXIT_IO


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _emit(args, data: dict, summary: str) -> None:
    if args.out:
        jsonio.write(args.out, data)
        print(summary)
    else:
        sys.stdout.write(jsonio.dumps(data))


def _load_set(path) -> OperatorSet:
    return jsonio.operator_set_from_json(jsonio.read(path))


def cmd_construct(args) -> int:
    fam = args.family
    if fam == "sic-d2":
        s = constructions.sic_d2()
    elif fam == "mubs-d2":
        s = constructions.projectors(constructions.mubs_d2())
        s.name = "mubs-d2"
    elif fam == "mubs-prime":
        if args.dim is None:
            raise BadParams("mubs-prime needs --dim")
        s = constructions.projectors(constructions.mubs_prime(args.dim))
        s.name = f"mubs-prime-{args.dim}"
    elif fam == "eight-d3":
        s = constructions.eight_ops_d3()
    elif fam == "counterexample-d2":
        s = constructions.counterexample_d2()
    elif fam == "theorem2":
        if args.mubs_dim is None:
            raise BadParams("theorem2 needs --mubs-dim")
        s = constructions.theorem2_collection(constructions.mubs(args.mubs_dim), args.index)
    else:
        raise UnknownFamily(f"unknown family {fam!r}; choose from {', '.join(FAMILIES)}")
    _emit(args, jsonio.operator_set_to_json(s), f"{fam}: {len(s)} elements, d={s.dim}")
    return EXIT_OK


def cmd_convert(args) -> int:
    s = rank1_convert(_load_set(args.povm))
    _emit(args, jsonio.operator_set_to_json(s),
          f"converted {len(s)} elements, ||sum F - I|| = {s.completeness_defect():.2e}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    state = jsonio.state_from_json(jsonio.read(args.state))
    s = _load_set(args.povm)
    if state.dim != s.dim:
        raise DimensionMismatch(f"state has d={state.dim}, operators d={s.dim}")
    if args.samples is not None:
        values = sample_frequencies(state, s, args.samples, args.seed)
        data = jsonio.outcomes_to_json(values, samples=args.samples, seed=args.seed)
    else:
        data = jsonio.outcomes_to_json(outcome_vector(state, s))
    _emit(args, data, f"{len(s)} outcome values written")
    return EXIT_OK


def _same_elements(a: OperatorSet, b: OperatorSet, tol: float = 1e-9) -> bool:
    return (a.dim == b.dim and len(a) == len(b)
            and all(np.linalg.norm(x - y) <= tol for x, y in zip(a.elements, b.elements)))


def cmd_reconstruct(args) -> int:
    s = _load_set(args.povm)
    p = jsonio.outcomes_from_json(jsonio.read(args.outcomes))
    raw = constructions.eight_ops_d3()
    if _same_elements(s, raw):
        state = reconstruct_d3(p)
    elif _same_elements(s, rank1_convert(raw)):
        state = reconstruct_d3_converted(p)
    else:
        raise BadParams("closed-form reconstruction supports the eight d=3 operators "
                        "or their rank-1 conversion; use `adaptive` for other dimensions")
    _emit(args, jsonio.state_to_json(state), f"reconstructed d={state.dim} state")
    return EXIT_OK


def cmd_adaptive(args) -> int:
    state = jsonio.state_from_json(jsonio.read(args.state))
    if args.dim is not None and args.dim != state.dim:
        raise DimensionMismatch(f"--dim {args.dim} but state has d={state.dim}")
    if args.sampled is not None:
        oracle = SampledOracle(state, args.sampled, args.seed)
        tr = adaptive_reconstruct(oracle, state.dim, support_tol=args.support_tol,
                                  consistency_tol=None)
    else:
        oracle = BornOracle(state)
        tr = adaptive_reconstruct(oracle, state.dim)
    data = tr.to_dict()
    data["fidelity"] = fidelity(state, tr.reconstructed)
    _emit(args, data, f"k={tr.support.k}, {tr.operator_count} operators, "
                      f"fidelity {data['fidelity']:.12f}")
    return EXIT_OK


def cmd_verify(args) -> int:
    s = _load_set(args.povm)
    rep = sampled_distinguishability(s, args.pairs, args.seed, n_refine=args.refine,
                                     mixed=args.mixed)
    _emit(args, rep.to_dict(), f"{rep.verdict}: min separation {rep.min_separation:.3e} "
                               f"over {rep.pairs_tested} pairs")
    return {PASS: EXIT_OK, FAIL: EXIT_FAIL}.get(rep.verdict, EXIT_INCONCLUSIVE)


def cmd_bounds(args) -> int:
    rep = bounds.report(args.dim)
    _emit(args, rep.to_dict(), f"d={args.dim}: m1 in {rep.m1_range.as_list()}")
    return EXIT_OK


class _CorruptFirstStage:
    """Oracle wrapper that shifts the largest value of the first answer."""

    def __init__(self, inner, offset: float):
        self.inner = inner
        self.offset = offset
        self.calls = 0

    def __call__(self, ops):
        vals = np.array(self.inner(ops), dtype=float)
        if self.calls == 0:
            vals[np.argmax(vals)] += self.offset
        self.calls += 1
        return vals


def cmd_roundtrip(args) -> int:
    state = haar_random(args.dim, args.seed)
    if args.adaptive:
        oracle = BornOracle(state)
        if args.corrupt:
            oracle = _CorruptFirstStage(oracle, args.corrupt)
        tr = adaptive_reconstruct(oracle, args.dim)
        rec, count, k = tr.reconstructed, tr.operator_count, tr.support.k
    else:
        if args.dim != 3:
            raise BadParams("the closed-form path is only defined for --dim 3; add --adaptive")
        p = outcome_vector(state, constructions.eight_ops_d3())
        if args.corrupt:
            p[3] += args.corrupt
        rec, count, k = reconstruct_d3(p), 8, None
    fid = fidelity(state, rec)
    ok = fid >= 1 - ROUNDTRIP_TOL
    data = {"dim": args.dim, "seed": args.seed, "adaptive": bool(args.adaptive),
            "operator_count": count, "k": k, "fidelity": fid,
            "verdict": PASS if ok else FAIL}
    print(f"{'PASS' if ok else 'FAIL'} dim={args.dim} seed={args.seed} "
          f"operators={count} fidelity={fid:.15f}")
    if args.out:
        jsonio.write(args.out, data)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="puretomo", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("-o", "--out", help="write JSON here instead of stdout")
        return p

    p = add("construct", cmd_construct, "write an explicit operator family")
    p.add_argument("family", help=f"one of: {', '.join(FAMILIES)}")
    p.add_argument("--dim", type=int, help="prime dimension for mubs-prime")
    p.add_argument("--mubs-dim", type=int, help="MUB dimension for theorem2 (2 or a prime)")
    p.add_argument("--index", type=int, default=0, help="theorem2 collection index")

    p = add("convert", cmd_convert, "rank-1 conversion of an operator set into a POVM")
    p.add_argument("--povm", required=True)

    p = add("simulate", cmd_simulate, "Born-rule outcome values for a state")
    p.add_argument("--state", required=True)
    p.add_argument("--povm", required=True)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=_seed, default=0)

    p = add("reconstruct", cmd_reconstruct, "closed-form d=3 reconstruction")
    p.add_argument("--povm", required=True)
    p.add_argument("--outcomes", required=True)

    p = add("adaptive", cmd_adaptive, "adaptive d+2k-2 reconstruction of a hidden state")
    p.add_argument("--dim", type=int)
    p.add_argument("--state", required=True)
    p.add_argument("--sampled", type=int, metavar="N", help="shots per operator")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--support-tol", type=float, default=1e-3,
                   help="support threshold in sampled mode")

    p = add("verify", cmd_verify, "sampled pure-state distinguishability audit")
    p.add_argument("--povm", required=True)
    p.add_argument("--pairs", type=int, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--refine", type=int, default=32)
    p.add_argument("--mixed", action="store_true", help="sample mixed-state pairs instead")

    p = add("bounds", cmd_bounds, "element-count bounds for dimension d")
    p.add_argument("--dim", type=int, required=True)

    p = add("roundtrip", cmd_roundtrip, "sample, simulate, reconstruct, compare")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--adaptive", action="store_true")
    p.add_argument("--corrupt", type=float, default=0.0,
                   help="add this offset to one outcome value")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TomographyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
