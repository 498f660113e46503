"""Command-line interface: ``dhomotopy homology|verify|build|smooth-verify``.

Exit status: 0 success, 1 a verification failed, 2 bad input (parse error,
invalid arguments), 3 the file system refused a read or write.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import formats as fm
from .complexes import Cover, cone, iterated_subdivision, nerve_of_cover, prism_complex
from .homology import chain_complex, format_homology, homology, homology_to_dict
from .hocolim import blowup_total_complex, verify_segal
from .verify import ALG_TOL, FD_TOL, SUITES, VerificationReport, run_suite, suite_smooth

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3


class CLIError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise CLIError(f"cannot read {path}: {e.strerror}", EXIT_IO) from None
    except UnicodeDecodeError:
        raise CLIError(f"{path} is not UTF-8 text", EXIT_INPUT) from None


def _load(path: str, reader):
    try:
        return reader(_read(path), source=path)
    except fm.FormatError as e:
        raise CLIError(str(e), EXIT_INPUT) from None


def _is_sset_text(text: str) -> bool:
    for _, words in fm._lines(text):
        return words[0].startswith("g") and any(w.startswith("dim=") for w in words[1:])
    return False


def _load_space(path: str):
    text = _read(path)
    reader = fm.read_sset if _is_sset_text(text) else fm.read_complex
    try:
        return reader(text, source=path)
    except fm.FormatError as e:
        raise CLIError(str(e), EXIT_INPUT) from None


def _emit(args, text_lines: list, data: dict):
    if args.format == "structured":
        sys.stdout.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


# -- subcommands ----------------------------------------------------------------------

def cmd_homology(args) -> int:
    X = _load_space(args.input)
    L = _load_space(args.relative) if args.relative else None
    if L is not None and type(L) is not type(X):
        raise CLIError("the relative subobject must have the same file type as the input", EXIT_INPUT)
    try:
        C = chain_complex(X, L)
    except ValueError as e:
        raise CLIError(str(e), EXIT_INPUT) from None
    groups = homology(C)
    while len(groups) > 1 and groups[-1].is_zero:
        groups.pop()
    lines = format_homology(groups)
    text = lines if args.per_line else ["; ".join(lines)]
    _emit(args, text, {"input": args.input, "relative": args.relative, "homology": homology_to_dict(groups)})
    return EXIT_OK


def _smooth_kwargs(args) -> dict:
    kw = {"p": args.p, "k": args.k, "eps": args.eps, "samples": args.samples,
          "tol": ALG_TOL if args.tol is None else args.tol,
          "fd_tol": FD_TOL if args.fd_tol is None else args.fd_tol}
    if args.p is not None and args.p < 1:
        raise CLIError("--p must be at least 1", EXIT_INPUT)
    if args.k is not None and (args.k < 0 or (args.p is not None and args.k >= args.p)):
        raise CLIError("--k must satisfy 0 <= k < p", EXIT_INPUT)
    if args.eps is not None and not 0 < args.eps < 0.5:
        raise CLIError("--eps must lie in (0, 1/2)", EXIT_INPUT)
    if args.samples < 2:
        raise CLIError("--samples must be at least 2", EXIT_INPUT)
    return kw


def _report(args, R: VerificationReport, extra: list | None = None) -> int:
    lines = R.lines() + (extra or [])
    _emit(args, lines, R.to_dict())
    return EXIT_OK if R.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    if args.suite == "smooth":
        R = suite_smooth(seed=args.seed, **_smooth_kwargs(args))
        return _report(args, R)
    if args.suite == "segal" and args.cover:
        cov = _load(args.cover, fm.read_cover)
        if not cov.is_covering:
            raise CLIError(f"{args.cover}: family does not cover the base; simplex "
                           f"{cov.uncovered_simplices()[0]} lies in no part", EXIT_INPUT)
        rep = verify_segal(cov)
        R = VerificationReport("segal", params={"cover": args.cover})
        for n, ok in enumerate(rep.iso):
            R.add(f"degree {n}: H(pr) iso", ok, str(rep.matrices[n]))
        return _report(args, R, rep.lines() if args.format == "text" else None)
    return _report(args, run_suite(args.suite, seed=args.seed))


def cmd_smooth_verify(args) -> int:
    return _report(args, suite_smooth(seed=args.seed, **_smooth_kwargs(args)))


def _write(args, text: str):
    if args.output in (None, "-"):
        if args.format == "text":
            sys.stdout.write(text)
        return
    try:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        raise CLIError(f"cannot write {args.output}: {e.strerror}", EXIT_IO) from None


def cmd_build(args) -> int:
    what = args.construction
    if what in ("sd", "cone", "nerve", "blowup") and not args.input:
        raise CLIError(f"build {what} needs an input file", EXIT_INPUT)
    info = {"construction": what, "output": args.output}
    if what == "sd":
        K = _load(args.input, fm.read_complex)
        if args.times < 0:
            raise CLIError("--times must be nonnegative", EXIT_INPUT)
        out = iterated_subdivision(K, args.times)
        text = fm.write_complex(out, f"sd^{args.times} of {args.input}")
        info["f_vector"] = list(out.f_vector)
    elif what == "cone":
        K = _load(args.input, fm.read_complex)
        out = cone(K)
        text = fm.write_complex(out, f"cone of {args.input}")
        info["f_vector"] = list(out.f_vector)
    elif what == "nerve":
        cov = _load(args.input, fm.read_cover)
        out = nerve_of_cover(cov)
        text = fm.write_complex(out, f"nerve of {args.input}")
        info["f_vector"] = list(out.f_vector)
    elif what == "prism":
        if args.p is None or args.k is None or args.p < 0 or args.k < 0:
            raise CLIError("build prism needs --p P --k K with P, K >= 0", EXIT_INPUT)
        P = prism_complex(args.p, args.k)
        # the two tagged ends are written as the parts of a (non-covering) cover file
        tagged = Cover(P.complex, [("top", P.top), ("bottom", P.bottom)])
        text = fm.write_cover(tagged, f"prism (Delta({args.p}) x I)^({args.k}); parts are the tagged ends")
        info["f_vector"] = list(P.complex.f_vector)
        info["top_f_vector"], info["bottom_f_vector"] = list(P.top.f_vector), list(P.bottom.f_vector)
    else:
        cov = _load(args.input, fm.read_cover)
        if not cov.is_covering:
            raise CLIError(f"{args.input}: family does not cover the base; simplex "
                           f"{cov.uncovered_simplices()[0]} lies in no part", EXIT_INPUT)
        B = blowup_total_complex(cov)
        text = fm.write_chain_complex(B.total, f"blowup total complex of {args.input}", labels=args.labels)
        info["ranks"] = list(B.total.ranks)
    _write(args, text)
    if args.format == "structured":
        _emit(args, [], info)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, tol: bool = False):
    p.add_argument("--format", choices=("text", "structured"), default="text",
                   help="text report or JSON (structured)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks (default 0)")
    if tol:
        p.add_argument("--tol", type=float, default=None, help=f"algebraic tolerance (default {ALG_TOL:g})")


def _smooth_flags(p: argparse.ArgumentParser):
    p.add_argument("--p", type=int, default=None, help="simplex dimension (default: all p <= 4)")
    p.add_argument("--k", type=int, default=None, help="skeleton index k < p (default: all)")
    p.add_argument("--eps", type=float, default=None, help="eps_0 in (0, 1/2) (default 0.25)")
    p.add_argument("--samples", type=int, default=1000, help="sample points per stratum")
    p.add_argument("--fd-tol", type=float, default=None, help=f"finite-difference tolerance (default {FD_TOL:g})")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dhomotopy", description="Simplicial homology, blowup complexes and "
                                 "numerical checks of the simplex smoothing maps.")
    sub = ap.add_subparsers(dest="command", required=True)

    h = sub.add_parser("homology", help="integer homology of a complex or simplicial-set file")
    h.add_argument("input", help="complex file (or generator table); '-' reads stdin")
    h.add_argument("--relative", metavar="FILE", help="subcomplex file for relative homology")
    h.add_argument("--per-line", action="store_true", help="one line per nonzero degree instead of '; '-separated")
    _common(h, tol=True)
    h.set_defaults(func=cmd_homology)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--cover", metavar="FILE", help="segal: verify this cover file instead of the fixtures")
    _common(v, tol=True)
    _smooth_flags(v)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("build", help="write a constructed object in its text format")
    b.add_argument("construction", choices=("sd", "cone", "nerve", "prism", "blowup"))
    b.add_argument("input", nargs="?", help="complex file (sd, cone) or cover file (nerve, blowup)")
    b.add_argument("-o", "--output", help="output file (default stdout)")
    b.add_argument("--times", type=int, default=1, help="sd: number of subdivisions")
    b.add_argument("--p", type=int, help="prism: simplex dimension")
    b.add_argument("--k", type=int, help="prism: subdivision depth")
    b.add_argument("--labels", action="store_true", help="blowup: also write the basis labels")
    _common(b, tol=True)
    b.set_defaults(func=cmd_build)

    s = sub.add_parser("smooth-verify", help="numerical checks of charts, smoothing maps and partitions")
    _common(s, tol=True)
    _smooth_flags(s)
    s.set_defaults(func=cmd_smooth_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except CLIError as e:
        print(f"dhomotopy: error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
