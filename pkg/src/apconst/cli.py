"""Command-line front end.

Exit codes: 0 success, 2 bad arguments, 3 requested digits out of reach,
4 internal cross-check failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from fractions import Fraction

import mpmath
from mpmath import mpf

from .census import asymptotic_ratio, census
from .characters import characters_mod
from .identities import candidates_to_json, solve
from .kappa import kappa
from .lseries import l_at, l_at_one
from .numerics import GUARD_BITS, Approx
from .primes import ResourceLimitError
from .residues import CrossCheckError, rho
from .verify import deterministic_json, run_suite

EXIT_ARGS, EXIT_BOUND, EXIT_CROSSCHECK = 2, 3, 4


class DigitsUnreachable(RuntimeError):
    pass


def bits_for_digits(digits: int) -> int:
    return math.ceil(3.33 * digits) + 64


def honest_digits(x: Approx) -> int:
    """Rough count of significant digits the error bound supports."""
    if x.error == 0:
        return 10 ** 6
    mag = abs(x.value)
    if mag == 0 or not mpmath.isfinite(x.error):
        return 0
    return int(mpmath.floor(mpmath.log10(mag / x.error))) - 1


def _fixed(n: int, frac_digits: int, negative: bool) -> str:
    if frac_digits > 0:
        body = str(n).rjust(frac_digits + 1, "0")
        body = body[:-frac_digits] + "." + body[-frac_digits:]
    else:
        body = str(n) + "0" * (-frac_digits)
    return ("-" if negative else "") + body


def _exact(x) -> Fraction:
    man, exp = mpf(x).man_exp
    return Fraction(man) * Fraction(2) ** exp if man else Fraction(0)


def _floor_log10(q: Fraction) -> int:
    e = len(str(q.numerator)) - len(str(q.denominator))
    while Fraction(10) ** e > q:
        e -= 1
    while Fraction(10) ** (e + 1) <= q:
        e += 1
    return e


def certified_string(x: Approx, digits: int):
    """``digits`` significant digits valid for every value within the error bound.

    The truncated expansion is preferred; when the interval straddles a digit
    boundary the correctly rounded string is used if that one is certified.
    Returns None when neither is.  Digit selection runs in exact rationals.
    """
    with mpmath.workprec(x.prec + GUARD_BITS + 64):
        v = mpmath.re(x.value)
        m, err = abs(_exact(v)), _exact(x.error)
    if m == 0 or err >= m:
        return None
    frac = digits - 1 - _floor_log10(m)
    scale = Fraction(10) ** frac
    lo, hi = (m - err) * scale, (m + err) * scale
    if math.floor(lo) == math.floor(hi):
        return _fixed(math.floor(hi), frac, v < 0)
    if round(lo) == round(hi):
        n = round(hi)
        if n == 10 ** digits:  # carried into the next decade
            n, frac = n // 10, frac - 1
        return _fixed(n, frac, v < 0)
    return None


def format_error(err) -> str:
    if err == 0:
        return "0"
    return mpmath.nstr(err, 3, min_fixed=1, max_fixed=0)


def constant_result(name: str, x: Approx, digits: int, method: str, parameters: dict,
                    elapsed: float, heuristic: bool = False) -> dict:
    if heuristic:
        digits = max(1, min(digits, honest_digits(x)))
    text = certified_string(x, digits)
    while text is None and heuristic and digits > 1:
        digits -= 1
        text = certified_string(x, digits)
    if text is None:
        raise DigitsUnreachable(f"{name}: {digits} digits are not certified by the error bound "
                                f"{format_error(x.error)}")
    return {"name": name, "value": text, "digits": digits,
            "error": format_error(x.error), "method": method, "parameters": parameters,
            "heuristic": heuristic, "elapsed": round(elapsed, 3)}


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _const_text(r: dict) -> str:
    tag = " (heuristic estimate)" if r["heuristic"] else ""
    return f"{r['name']} = {r['value']}  [error <= {r['error']}, {r['method']}]{tag}"


def _digits_arg(args) -> tuple:
    if args.digits < 1:
        raise ValueError("--digits must be positive")
    return args.digits, args.bits or bits_for_digits(args.digits)


# ---------------------------------------------------------------------------


def cmd_rho(args, want_mu=False):
    digits, bits = _digits_arg(args)
    if args.modulus < 1 or math.gcd(args.klass, args.modulus) != 1:
        raise ValueError("class must be coprime to a positive modulus")
    start = time.perf_counter()
    method = "both" if want_mu else args.method
    res = rho(args.modulus, args.klass, bits, args.strip_below, method=method)
    value = res.mu if want_mu else res.rho
    name = f"{'mu' if want_mu else 'rho'}({args.klass},{args.modulus})"
    r = constant_result(name, value, digits, res.method,
                        {"precision_bits": bits, "prime_limit": args.strip_below},
                        time.perf_counter() - start)
    _emit(args, r, _const_text(r))


def cmd_mu(args):
    cmd_rho(args, want_mu=True)


def cmd_kappa(args):
    digits, bits = _digits_arg(args)
    if not 2 <= args.order <= 9:
        raise ValueError("order must lie in 2..9")
    start = time.perf_counter()
    res = kappa(args.order, args.method, bits, args.strip_below, args.prime_limit)
    params = {"precision_bits": bits}
    if args.method == "gcd-slow":
        params["prime_limit"] = args.prime_limit or 10 ** 6
    else:
        params["prime_limit"] = args.strip_below
    r = constant_result(f"K_{args.order}", res.value, digits, res.method, params,
                        time.perf_counter() - start, heuristic=res.heuristic)
    r["flags"] = list(res.flags)
    r["components"] = {k: _component(v) for k, v in sorted(res.components.items())}
    _emit(args, r, _const_text(r) + ("".join(f"\n  flag: {f}" for f in res.flags)))


def _component(v):
    if isinstance(v, Approx):
        with mpmath.workprec(v.prec + GUARD_BITS):
            return mpmath.nstr(mpmath.re(v.value), 30)
    if isinstance(v, dict):
        return {str(k): _component(x) for k, x in sorted(v.items())}
    if isinstance(v, (Fraction, int)) or v is None:
        return None if v is None else str(v)
    return mpmath.nstr(v, 15) if isinstance(v, (mpf, float)) else str(v)


def _parse_s(text: str):
    s = Fraction(text)
    return s.numerator if s.denominator == 1 else s


def cmd_lvalue(args):
    digits, bits = _digits_arg(args)
    chars = characters_mod(args.modulus)
    if not 1 <= args.char_index <= len(chars):
        raise ValueError(f"character index must lie in 1..{len(chars)}")
    chi = chars[args.char_index - 1]
    s = _parse_s(args.s)
    start = time.perf_counter()
    if s == 1:
        lv = l_at_one(chi, bits)
    elif s >= 2:
        lv = l_at(chi, s, bits)
    else:
        raise ValueError("s must be 1 or at least 2")
    x = lv.approx
    name = f"L({args.s}, chi_{args.char_index} mod {args.modulus})"
    r = constant_result(name, x, digits, "hurwitz" if s != 1 else "digamma",
                        {"precision_bits": bits}, time.perf_counter() - start)
    with mpmath.workprec(bits + GUARD_BITS):
        im = mpmath.im(x.value)
        if abs(im) > x.error:
            r["imag"] = certified_string(Approx(im, x.error, x.prec), digits)
            if r["imag"] is None:
                raise DigitsUnreachable(f"{name}: imaginary part not certified to {digits} digits")
    r["character"] = {"index": chi.index, "order": chi.order, "conductor": chi.conductor,
                      "exponents": list(chi.exponents)}
    _emit(args, r, _const_text(r) + (f" + {r['imag']} i" if "imag" in r else ""))


def cmd_census(args):
    if args.order < 1 or args.max_n < 1:
        raise ValueError("order and max-n must be positive")
    start = time.perf_counter()
    table = census(args.order, args.max_n)
    if args.csv:
        table.to_csv(args.csv)
    rows = list(table.rows())
    payload = {"order": args.order, "max_n": args.max_n, "sum": table.S(args.max_n),
               "ratios": [[n, round(v, 12)] for n, v in asymptotic_ratio(table)] if args.max_n >= 3 else [],
               "elapsed": round(time.perf_counter() - start, 3)}
    if args.max_n <= 1000:
        payload["rows"] = [list(r) for r in rows]
    shown = rows if args.max_n <= 50 else rows[-10:]
    text = ["n,b,partial_sum"] + [",".join(map(str, r)) for r in shown]
    if args.max_n > 50:
        text.insert(1, "...")
    _emit(args, payload, "\n".join(text))


def cmd_identity(args):
    if args.modulus < 3 or args.target_exp < 1 or args.max_dilation < 2:
        raise ValueError("need modulus >= 3, target-exp >= 1, max-dilation >= 2")
    sols = solve(args.modulus, args.target_exp, args.max_dilation)
    rep = sols.report
    if args.json:
        print(candidates_to_json(sols, rep))
        return
    print(f"variables {rep.variables}, atoms {rep.atoms}, rank {rep.rank}, "
          f"kernel rank {rep.kernel_rank}, solvable {rep.solvable}")
    if rep.note:
        print(rep.note)
    for c in sols:
        print(f"  {c.describe()}")


def cmd_verify(args):
    report = run_suite(args.tier, args.threads)
    if args.json:
        print(deterministic_json(report))
        print(json.dumps({"timings": report["timings"]}, sort_keys=True), file=sys.stderr)
    else:
        for rec in report["criteria"]:
            status = "SKIP" if rec["skipped"] else ("PASS" if rec["passed"] else "FAIL")
            t = report["timings"][str(rec["id"])]
            print(f"[{status}] {rec['id']:2d}. {rec['title']} ({t:.1f} s)")
            for c in rec["checks"]:
                if not c["passed"]:
                    print(f"        failed: {c['name']}: {c['observed']} (expected {c['expected']})")
    if not report["passed"]:
        return EXIT_CROSSCHECK
    return 0


# ---------------------------------------------------------------------------


def _threads(value) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("threads must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="apconst", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--threads", type=_threads,
                   default=_threads(os.environ.get("APCONST_THREADS", "1")))
    sub = p.add_subparsers(dest="command", required=True)

    def common(q, digits=True):
        q.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        q.add_argument("--threads", type=_threads, default=argparse.SUPPRESS)
        if digits:
            q.add_argument("--digits", type=int, required=True)
            q.add_argument("--bits", type=int, default=None, help="override working precision")
            q.add_argument("--strip-below", type=int, default=1000,
                           help="primes up to this bound are multiplied explicitly")

    q = sub.add_parser("rho", help="residue rho(k, l)")
    q.add_argument("--modulus", type=int, required=True)
    q.add_argument("--class", dest="klass", type=int, required=True)
    q.add_argument("--method", choices=["closed", "analytic", "both"], default="both")
    common(q)
    q.set_defaults(func=cmd_rho)

    q = sub.add_parser("mu", help="Mertens constant mu(k, l)")
    q.add_argument("--modulus", type=int, required=True)
    q.add_argument("--class", dest="klass", type=int, required=True)
    common(q)
    q.set_defaults(func=cmd_mu)

    q = sub.add_parser("kappa", help="census constant K_l")
    q.add_argument("--order", type=int, required=True)
    q.add_argument("--method", choices=["closed", "assembled", "gcd-slow"], default="closed")
    q.add_argument("--prime-limit", type=int, default=None)
    common(q)
    q.set_defaults(func=cmd_kappa)

    q = sub.add_parser("lvalue", help="Dirichlet L-value")
    q.add_argument("--modulus", type=int, required=True)
    q.add_argument("--char-index", type=int, required=True)
    q.add_argument("--s", required=True)
    common(q)
    q.set_defaults(func=cmd_lvalue)

    q = sub.add_parser("census", help="primitive character counts b_l(n)")
    q.add_argument("--order", type=int, required=True)
    q.add_argument("--max-n", type=int, required=True)
    q.add_argument("--csv", default=None)
    common(q, digits=False)
    q.set_defaults(func=cmd_census)

    q = sub.add_parser("identity", help="search L-function combinations")
    q.add_argument("--modulus", type=int, required=True)
    q.add_argument("--target-exp", type=int, required=True)
    q.add_argument("--max-dilation", type=int, required=True)
    common(q, digits=False)
    q.set_defaults(func=cmd_identity)

    q = sub.add_parser("verify", help="run the reference acceptance suite")
    q.add_argument("--suite", choices=["paper"], default="paper")
    q.add_argument("--tier", choices=["fast", "full"], default="fast")
    common(q, digits=False)
    q.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0) and EXIT_ARGS
    try:
        return args.func(args) or 0
    except (ValueError, ZeroDivisionError) as e:
        print(f"apconst: error: {e}", file=sys.stderr)
        return EXIT_ARGS
    except (DigitsUnreachable, ResourceLimitError) as e:
        print(f"apconst: {e}", file=sys.stderr)
        return EXIT_BOUND
    except CrossCheckError as e:
        print(f"apconst: cross-check failed: {e}", file=sys.stderr)
        return EXIT_CROSSCHECK


if __name__ == "__main__":
    sys.exit(main())
