"""Command-line front end: ``charp <command> [options] EXPR``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 mathematical precondition failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .artin_schreier import as_reduce
from .errors import CharpError, MathError
from .fields import FieldConfig, is_prime
from .forms import DifferentialForm, LogTermSum, log_to_form
from .laurent import LaurentClass, LaurentField, ValuedExtension, canonicalize, extend_scalars, residues
from .rational import RationalFunction
from .suites import SUITES, run_suite
from .symbols import GenericSymbolSpec, MilnorSymbol, make_generic_symbol, residue_chain_certificate, tame_symbol
from .textio import expression_names, format_value, form_terms, format_rational, natural_key, parse_expression

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_MATH = 0, 1, 2, 3


class UsageError(CharpError):
    pass


# ---------------------------------------------------------------------------
# serialization


def form_json(omega: DifferentialForm | None):
    if omega is None:
        return None
    terms = [{"basis": names, "coefficient": format_rational(g)} for g, names in form_terms(omega)]
    terms.sort(key=lambda t: ([natural_key(v) for v in t["basis"]], t["coefficient"]))
    return {"degree": omega.degree, "terms": terms}


def value_json(value):
    if value is None:
        return None
    if isinstance(value, RationalFunction):
        return {"kind": "function", "text": format_rational(value)}
    if isinstance(value, LogTermSum):
        return {"kind": "form", "text": format_value(value), **form_json(log_to_form(value))}
    if isinstance(value, DifferentialForm):
        return {"kind": "form", "text": format_value(value), **form_json(value)}
    if isinstance(value, LaurentClass):
        comps = [{"pole": i, "omega": form_json(om), "nu": form_json(nu)}
                 for i, (om, nu) in sorted(value.components.items())]
        return {"kind": "laurent", "uniformizer": value.field.pi, "degree": value.degree,
                "text": format_value(value), "components": comps}
    if isinstance(value, MilnorSymbol):
        terms = [{"entries": [format_rational(a) for a in entries], "coefficient": k}
                 for entries, k in value.terms]
        return {"kind": "symbol", "length": value.length, "text": format_value(value), "terms": terms}
    raise TypeError(f"cannot serialize {type(value).__name__}")


def text(value) -> str:
    return "none" if value is None else format_value(value)


# ---------------------------------------------------------------------------
# session


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("CHARP_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"CHARP_SEED must be an integer, got {env!r}") from None


def _variables(args, texts, extra=()):
    if args.vars:
        names = [v.strip() for v in args.vars.split(",") if v.strip()]
    else:
        names = []
        for t in texts:
            names.extend(expression_names(t))
        names = sorted(set(names), key=natural_key)
    for v in extra:
        if v not in names:
            names.append(v)
    return names


def _config(args, names) -> FieldConfig:
    if not is_prime(args.p):
        raise UsageError(f"--p must be prime, got {args.p}")
    return FieldConfig(args.p, args.field_ext, tuple(names))


def _laurent_config(args, texts, pi):
    names = [v for v in _variables(args, texts) if v != pi]
    return _config(args, names + [pi])


def _as_class(value, config, pi) -> LaurentClass:
    field_ = LaurentField(config.without(pi), pi)
    if isinstance(value, LaurentClass):
        return value
    if isinstance(value, MilnorSymbol):
        raise UsageError("expected a form, got a Milnor symbol")
    if isinstance(value, RationalFunction):
        value = DifferentialForm.scalar(value)
    elif isinstance(value, LogTermSum):
        value = log_to_form(value)
    return LaurentClass.from_form(field_, value.reindex(field_.ambient))


# ---------------------------------------------------------------------------
# commands; each returns (exit code, report body, text lines)


def cmd_residue(args):
    config = _laurent_config(args, [args.expr], args.pi)
    f = _as_class(parse_expression(args.expr, config, args.pi), config, args.pi)
    first, second = residues(f)
    body = {"inputs": {"class": value_json(f)},
            "outputs": {"first_residue": value_json(first), "second_residue": value_json(second)}}
    lines = [f"class: {text(f)}", f"d1 = {text(first)}", f"d2 = {text(second)}"]
    return EXIT_OK, body, lines


def _certificate_json(cert):
    return {"exact": [{"pole": N, "xi": value_json(xi)} for N, xi in cert.exact],
            "wp_images": [{"pole": N, "term": value_json(t)} for N, t in cert.as_images]}


def _decomposition(cd, lines, body):
    body["outputs"]["canonical"] = value_json(cd.reassemble())
    body["outputs"]["h0"] = {"omega": value_json(cd.h0_omega), "nu": value_json(cd.h0_nu)}
    body["outputs"]["pieces"] = [{"pole": k, "omega": value_json(pc.omega), "nu": value_json(pc.nu)}
                                 for k, pc in cd.higher.items()]
    lines.append(f"canonical: {text(cd.reassemble())}")
    lines.append(f"  h0: omega = {text(cd.h0_omega)}; nu = {text(cd.h0_nu)}")
    for k, pc in cd.higher.items():
        lines.append(f"  pole {k}: omega = {text(pc.omega)}; nu = {text(pc.nu)}")


def cmd_canonical(args):
    config = _laurent_config(args, [args.expr], args.pi)
    f = _as_class(parse_expression(args.expr, config, args.pi), config, args.pi)
    cd = canonicalize(f)
    ok = cd.verify_certificate(f)
    body = {"inputs": {"class": value_json(f)}, "outputs": {},
            "certificates": _certificate_json(cd.certificate), "verdict": {"certificate_verified": ok}}
    lines = [f"class: {text(f)}"]
    _decomposition(cd, lines, body)
    lines.append("certificate:")
    for N, xi in cd.certificate.exact:
        lines.append(f"  exact from pole {N}: d({text(xi)})")
    for N, t in cd.certificate.as_images:
        lines.append(f"  wp image from pole {N}: wp({text(t)})")
    lines.append(f"certificate verified: {'yes' if ok else 'no'}")
    return (EXIT_OK if ok else EXIT_FAIL), body, lines


def cmd_extend(args):
    tau, pi = args.tau, args.pi
    if tau == pi:
        raise UsageError("--tau and --pi must differ")
    source_names = [v for v in _variables(args, [args.expr]) if v not in (tau, pi)]
    source = _config(args, source_names + [tau])
    f = _as_class(parse_expression(args.expr, source, tau), source, tau)
    u_names = [v for v in expression_names(args.u) if v not in (tau, pi)]
    target_names = source_names + [v for v in sorted(u_names, key=natural_key) if v not in source_names]
    target = LaurentField(_config(args, target_names), pi)
    u = parse_expression(args.u, target.coeff)
    if isinstance(u, int):
        u = RationalFunction.from_int(target.coeff, u)
    if not isinstance(u, RationalFunction):
        raise UsageError("--u must be a rational function")
    ext = ValuedExtension(args.e, u)
    g = extend_scalars(f, ext, target)
    body = {"inputs": {"class": value_json(f), "e": args.e, "u": value_json(u), "tau": tau},
            "outputs": {"extended": value_json(g)}}
    lines = [f"class: {text(f)}", f"{tau} = ({text(u)})*{pi}^{args.e}", f"extended: {text(g)}"]
    _decomposition(canonicalize(g), lines, body)
    return EXIT_OK, body, lines


def _spec(args):
    if args.n < 0 or args.l < 1:
        raise UsageError("need --n >= 0 and --l >= 1")
    return GenericSymbolSpec(args.n, args.l, args.p, args.field_ext)


def cmd_gen(args):
    g = make_generic_symbol(_spec(args))
    return EXIT_OK, {"inputs": {"n": args.n, "l": args.l}, "outputs": {"symbol": value_json(g)}}, [text(g)]


def cmd_chain(args):
    spec = _spec(args)
    cert = residue_chain_certificate(spec)
    steps = [{"variable": s.variable, "map": s.map, "representative": value_json(s.representative)}
             for s in cert.steps]
    red = cert.terminal
    verdict = {"nontrivial": cert.nontrivial}
    body = {"inputs": {"n": args.n, "l": args.l, "symbol": value_json(make_generic_symbol(spec))},
            "certificates": {"steps": steps, "terminal": value_json(cert.terminal_value),
                             "terminal_representative": value_json(red.representative),
                             "terminal_witness": value_json(red.witness)},
            "verdict": verdict}
    lines = [f"symbol: {text(make_generic_symbol(spec))}"]
    for s in cert.steps:
        lines.append(f"  {s.map} residue at {s.variable}: {text(s.representative)}")
    lines.append(f"terminal: {text(cert.terminal_value)}")
    lines.append(f"nontrivial: {'yes' if cert.nontrivial else 'no'}")
    return (EXIT_OK if cert.nontrivial else EXIT_FAIL), body, lines


def cmd_tame(args):
    names = _variables(args, [args.expr], extra=[args.pi])
    config = _config(args, names)
    s = parse_expression(args.expr, config)
    if not isinstance(s, MilnorSymbol):
        raise UsageError("tame expects a Milnor symbol such as {x, y}")
    r = tame_symbol(s, args.pi)
    body = {"inputs": {"symbol": value_json(s), "valuation": args.pi}, "outputs": {"tame": value_json(r)}}
    return EXIT_OK, body, [f"symbol: {text(s)}", f"tame symbol at {args.pi}: {text(r)}"]


def cmd_as_reduce(args):
    names = _variables(args, [args.expr]) or ["t"]
    if len(names) != 1:
        raise UsageError(f"as-reduce needs a one-variable function, got variables {', '.join(names)}")
    config = _config(args, names)
    f = parse_expression(args.expr, config)
    if isinstance(f, int):
        f = RationalFunction.from_int(config, f)
    if not isinstance(f, RationalFunction):
        raise UsageError("as-reduce expects a rational function")
    red = as_reduce(f)
    poles = [{"place": s if s == "inf" else format_value(s), "order": k} for s, k in red.pole_data]
    body = {"inputs": {"function": value_json(f)},
            "outputs": {"representative": value_json(red.representative), "poles": poles},
            "certificates": {"witness": value_json(red.witness)},
            "verdict": {"trivial": red.trivial}}
    lines = [f"function: {text(f)}", f"representative: {text(red.representative)}",
             f"witness: {text(red.witness)}"]
    lines += [f"  pole of order {p['order']} at {p['place']}" for p in poles]
    lines.append("trivial" if red.trivial else "nontrivial")
    return EXIT_OK, body, lines


def cmd_verify(args):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from all, {', '.join(SUITES)}")
    seed = _seed(args)
    results, lines, ok = [], [], True
    for name in names:
        res = run_suite(name, seed=seed, trials=args.trials)
        ok &= res.passed
        cases = sorted(res.cases, key=lambda c: str(c["case"]))
        results.append({"suite": name, "passed": res.passed, "cases": len(cases),
                        "failures": [c for c in cases if not c["ok"]], "notes": res.notes})
        lines.append(f"{name}: {'PASS' if res.passed else 'FAIL'} "
                     f"({len(cases) - len(res.failures)}/{len(cases)} cases)")
        for c in res.failures:
            lines.append(f"  failed case {c['case']}: {c}")
    return (EXIT_OK if ok else EXIT_FAIL), {"outputs": {"suites": results}, "verdict": {"passed": ok}}, lines


COMMANDS = {
    "residue": cmd_residue,
    "canonical": cmd_canonical,
    "extend": cmd_extend,
    "gen": cmd_gen,
    "chain": cmd_chain,
    "tame": cmd_tame,
    "as-reduce": cmd_as_reduce,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2, help="characteristic (default 2)")
    common.add_argument("--field-ext", type=int, default=1, metavar="E",
                        help="coefficients in F_{p^E} (default 1)")
    common.add_argument("--vars", help="comma-separated variable names (inferred if omitted)")
    common.add_argument("--pi", default="pi", help="uniformizer name (default pi)")
    common.add_argument("--seed", type=int, help="session seed (falls back to CHARP_SEED, then 0)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--trials", type=int, help="override the number of random cases per suite")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")

    parser = argparse.ArgumentParser(prog="charp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("residue", "first and second residues of a class in U_0"),
                           ("canonical", "canonical form with its witness certificate"),
                           ("tame", "tame symbol of a Milnor symbol at the --pi valuation"),
                           ("as-reduce", "decide a class of F_q(t) modulo g^p - g")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("expr")
    sp = sub.add_parser("extend", parents=[common], help="extend scalars along tau = u*pi^e")
    sp.add_argument("expr")
    sp.add_argument("--tau", default="tau", help="uniformizer of the source field (default tau)")
    sp.add_argument("--e", type=int, default=1, help="ramification index")
    sp.add_argument("--u", default="1", help="unit u of the target coefficient field")
    for name, helptext in (("gen", "generic symbol"), ("chain", "residue chain certificate")):
        sp = sub.add_parser(name, parents=[common], help=f"{helptext} with --n dlog factors and --l terms")
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--l", type=int, required=True)
    sp = sub.add_parser("verify", parents=[common], help="run a property campaign")
    sp.add_argument("suite", help=f"one of: all, {', '.join(SUITES)}")
    return parser


def run_command(argv):
    """Run one command; returns (exit code, report dict, rendered output)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
        return code, None, ""
    start = time.perf_counter()
    report = {"schema_version": SCHEMA_VERSION, "command": ["charp", *argv]}
    try:
        seed = _seed(args)
        report["session"] = {"p": args.p, "field_ext": args.field_ext, "pi": args.pi, "seed": seed}
        code, body, lines = COMMANDS[args.command](args)
        report.update(body)
        report["exit_code"] = code
    except MathError as exc:
        code, lines = EXIT_MATH, [f"error: {exc}"]
        report["error"] = {"kind": type(exc).__name__, "message": str(exc)}
    except CharpError as exc:
        code, lines = EXIT_USAGE, [f"error: {exc}"]
        report["error"] = {"kind": type(exc).__name__, "message": str(exc)}
    report["exit_code"] = code
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 6)
        lines = lines + [f"time: {report['timing_seconds']:.3f}s"]
    if args.format == "json":
        out = json.dumps(report, indent=2, sort_keys=True)
    else:
        seed_line = f"# charp {' '.join(argv)}  (seed {report.get('session', {}).get('seed', '?')})"
        out = "\n".join([seed_line, *lines])
    return code, report, out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, report, out = run_command(list(argv))
    if out:
        failed = report is not None and "error" in report
        stream = sys.stderr if failed and not out.startswith("{") else sys.stdout
        print(out, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
