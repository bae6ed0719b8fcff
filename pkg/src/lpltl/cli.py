"""Command line front end: ``python -m lpltl <command> ...``.

Exit status is 0 for success (checked, true, SAT, valid), 1 for a negative
answer (check failed, false, NOMODEL, invalid) and 2 for usage or input
format errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import canon
from .corpus import theorem_corpus
from .internalize import eliminate_necessitation, internalize, internalize_g
from .proof import (
    Derivation,
    NotAxAppropriate,
    ProofFormatError,
    SchematicCS,
    TautologyTooLarge,
    check_derivation,
    load_cs,
    read_proof,
    write_proof,
)
from .semantics import (
    EvidenceDepthExceeded,
    UnsupportedTerm,
    load_system,
    validate_system,
    write_system,
)
from .syntax import (
    LogicError,
    ParseError,
    Variant,
    agents_of,
    formula_size,
    neg,
    parse_formula,
    pretty,
    print_formula,
    print_term,
    subformulas,
)

REPORT_SCHEMA = "lpltl-report"
REPORT_VERSION = 1


class UsageError(Exception):
    pass


class Report:
    def __init__(self, command: str):
        self.command = command
        self.ok = True
        self.data: dict = {}
        self.diagnostics: list[dict] = []
        self.text: list[str] = []

    def say(self, line: str) -> None:
        self.text.append(line)

    def diag(self, level: str, message: str, **where) -> None:
        self.diagnostics.append({"level": level, "message": message, **where})

    def envelope(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "version": REPORT_VERSION,
            "command": self.command,
            "ok": self.ok,
            "data": self.data,
            "diagnostics": self.diagnostics,
        }


def _formula_text(arg: str) -> str:
    p = Path(arg)
    if "\n" not in arg and len(arg) < 4096:
        try:
            if p.is_file():
                return p.read_text(encoding="utf-8").strip()
        except OSError:
            pass
    return arg


def _variant(args, default: Variant = Variant.LPLTL) -> Variant:
    return Variant.parse(args.variant) if args.variant else default


def _need(args, *names: str) -> None:
    for n in names:
        if getattr(args, n, None) is None:
            raise UsageError(f"{args.command} needs --{n.replace('_', '-')}")


def _load_proof(args) -> Derivation:
    path = Path(args.proof)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    d = read_proof(text, str(path))
    if args.variant:
        d = Derivation(d.lines, Variant.parse(args.variant), d.agents, d.cs_ref)
    if args.agents:
        d = Derivation(d.lines, d.variant, args.agents, d.cs_ref)
    return d


def _cs_for(args, variant: Variant, ref: str = "schematic", base: Path | None = None, agents: int | None = None):
    ref = args.cs if args.cs else ref
    return load_cs(ref, variant, None if args.cs else base, args.experimental, agents)


def _emit(args, text: str, report: Report, key: str) -> None:
    """Write an artifact to --out if given, else include it in the report."""
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        report.data[key + "_path"] = args.out
    else:
        report.data[key] = text
        report.say(text.rstrip("\n"))


# ---------------------------------------------------------------------------
# Commands


def cmd_parse(args, report: Report) -> None:
    _need(args, "formula")
    variant = _variant(args) if args.variant else None
    f = parse_formula(_formula_text(args.formula), args.agents, variant, args.experimental)
    report.data.update(
        formula=print_formula(f),
        pretty=pretty(f),
        size=formula_size(f),
        subformulas=len(subformulas(f)),
        agents=sorted(agents_of(f)),
    )
    report.say(print_formula(f))
    report.say(f"pretty: {pretty(f)}")
    report.say(f"size: {formula_size(f)}  subformulas: {len(subformulas(f))}")


def cmd_check(args, report: Report) -> None:
    _need(args, "proof")
    d = _load_proof(args)
    cs = _cs_for(args, d.variant, d.cs_ref, Path(args.proof).parent, d.agents)
    rep = check_derivation(d, cs, experimental=args.experimental)
    report.ok = rep.ok
    report.data.update(
        variant=d.variant.value,
        lines=len(d.lines),
        conclusion=print_formula(d.conclusion) if d.lines else None,
        failures=[
            {"line": v.index, "error": v.error, "message": v.message} for v in rep.verdicts if not v.ok
        ],
    )
    for v in rep.verdicts:
        if not v.ok:
            report.diag("error", v.message, kind=v.error, file=args.proof, line=v.index)
    report.say(rep.summary())


def cmd_eval(args, report: Report) -> None:
    _need(args, "system", "formula")
    s = load_system(args.system)
    val = validate_system(s)
    if not val.ok:
        for v in val.violations:
            report.diag("error", v, file=args.system)
        raise UsageError(f"{args.system} is not a valid interpreted system")
    f = parse_formula(_formula_text(args.formula), s.agents, s.variant, s.experimental)
    if args.run is not None or args.pos is not None:
        run = args.run or 0
        pos = args.pos or 0
        if not 0 <= run < len(s.runs):
            raise UsageError(f"run {run} out of range 0..{len(s.runs) - 1}")
        if pos < 0:
            raise UsageError("position must be non-negative")
        result = s.truth(run, pos, f)
        report.data.update(formula=print_formula(f), run=run, position=pos, value=result)
        report.say(f"{'true' if result else 'false'} at run {run}, position {pos}")
    else:
        failing = [
            {"run": k, "position": n}
            for k, r in enumerate(s.runs)
            for n in r.positions()
            if not s.truth(k, n, f)
        ]
        result = not failing
        report.data.update(formula=print_formula(f), value=result, failing=failing)
        report.say("true at every point" if result else f"false at {len(failing)} point(s)")
        for p in failing:
            report.say(f"  run {p['run']} position {p['position']}")
    report.ok = result


def cmd_valid(args, report: Report) -> None:
    if args.system:
        s = load_system(args.system)
        val = validate_system(s)
        report.ok = val.ok
        report.data.update(target="system", violations=val.violations, states=len(s.states), runs=len(s.runs))
        for v in val.violations:
            report.diag("error", v, file=args.system)
        report.say("valid interpreted system" if val.ok else f"{len(val.violations)} violation(s)")
        for v in val.violations:
            report.say(f"  {v}")
        return
    _need(args, "formula")
    variant = _variant(args)
    f = parse_formula(_formula_text(args.formula), args.agents, variant, args.experimental)
    cert = canon.decide(neg(f), _cs_for(args, variant, agents=args.agents), variant, args.agents)
    report.ok = not cert.sat
    report.data.update(target="formula", formula=print_formula(f), valid=report.ok, stats=cert.stats)
    if cert.sat:
        report.say("not valid; countermodel:")
        _emit(args, write_system(cert.system, args.cs or "schematic"), report, "countermodel")
    else:
        report.say("valid (negation has no model)")


def cmd_sat(args, report: Report) -> None:
    _need(args, "formula")
    variant = _variant(args)
    f = parse_formula(_formula_text(args.formula), args.agents, variant, args.experimental)
    cert = canon.decide(f, _cs_for(args, variant, agents=args.agents), variant, args.agents)
    report.ok = cert.sat
    report.data.update(formula=print_formula(f), status=cert.status, stats=cert.stats)
    if cert.sat:
        report.say("SAT")
        _emit(args, write_system(cert.system, args.cs or "schematic"), report, "system")
    else:
        s = cert.stats
        report.say(
            f"NOMODEL: {s['atoms']} atoms generated, {s['pruned']} pruned, {s['sccs']} SCCs examined"
        )


def cmd_elim_nec(args, report: Report) -> None:
    _need(args, "proof")
    d = _load_proof(args)
    if d.variant is not Variant.LPLTL:
        raise UsageError("elim-nec expects an LPLTL derivation")
    cs = _cs_for(args, Variant.LPLTL_STAR, d.cs_ref, Path(args.proof).parent, d.agents)
    out = eliminate_necessitation(d, cs)
    rep = check_derivation(out, cs, experimental=args.experimental)
    report.ok = rep.ok
    report.data.update(lines_in=len(d.lines), lines_out=len(out.lines), checked=rep.ok)
    _emit(args, write_proof(out), report, "proof")


def cmd_internalize(args, report: Report) -> None:
    _need(args, "proof")
    d = _load_proof(args)
    agent = args.agent or 1
    base = Path(args.proof).parent
    if d.variant is Variant.LPLTL_G:
        cs = _cs_for(args, Variant.LPLTL_G, d.cs_ref, base, d.agents)
        res = internalize_g(d, agent, cs)
    else:
        cs = _cs_for(args, Variant.LPLTL_STAR, d.cs_ref, base, d.agents)
        src = eliminate_necessitation(d, cs) if d.variant is Variant.LPLTL else d
        res = internalize(src, agent, cs)
    rep = check_derivation(res.derivation, cs, experimental=args.experimental)
    report.ok = rep.ok
    report.data.update(
        term=print_term(res.term),
        agent=agent,
        lines_in=len(d.lines),
        lines_out=len(res.derivation.lines),
        checked=rep.ok,
    )
    report.say(f"term: {print_term(res.term)}")
    _emit(args, write_proof(res.derivation), report, "proof")


def cmd_corpus(args, report: Report) -> None:
    rows = []
    for name, d, variant in theorem_corpus():
        rep = check_derivation(d, SchematicCS(variant))
        rows.append({"name": name, "variant": variant.value, "lines": len(d.lines), "ok": rep.ok})
        report.say(f"{'ok  ' if rep.ok else 'FAIL'} {name:<18} {variant.value:<8} {len(d.lines):>3} lines")
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{name}.prf").write_text(write_proof(d), encoding="utf-8")
        if not rep.ok:
            report.diag("error", rep.summary(), entry=name)
    report.ok = all(r["ok"] for r in rows)
    report.data["entries"] = rows


COMMANDS = {
    "parse": cmd_parse,
    "check": cmd_check,
    "eval": cmd_eval,
    "valid": cmd_valid,
    "sat": cmd_sat,
    "internalize": cmd_internalize,
    "elim-nec": cmd_elim_nec,
    "corpus": cmd_corpus,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lpltl", description="Temporal justification logic toolkit")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--variant", help="LPLTL, LPLTL* or LPLTL^G")
    p.add_argument("--cs", help="constant specification: a file path or 'schematic'")
    p.add_argument("--agents", type=int, help="number of agents")
    p.add_argument("--system", help="interpreted system file")
    p.add_argument("--proof", help="proof file")
    p.add_argument("--formula", help="formula text, or a path to a file holding it")
    p.add_argument("--agent", type=int, help="agent index for internalization")
    p.add_argument("--run", type=int, help="run index for eval")
    p.add_argument("--pos", type=int, help="position for eval")
    p.add_argument("--out", help="write the produced artifact here")
    p.add_argument("--experimental", action="store_true", help="enable the additional temporal-evidence axioms")
    p.add_argument("--json", action="store_true", help="print a machine-readable report")
    return p


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    report = Report(args.command)
    code = None
    try:
        if args.agents is not None and args.agents < 1:
            raise UsageError("--agents must be at least 1")
        COMMANDS[args.command](args, report)
    except UsageError as exc:
        report.diag("error", str(exc))
        code = 2
    except ProofFormatError as exc:
        report.diag("error", str(exc), kind=type(exc).__name__, line=exc.line)
        code = 2
    except ParseError as exc:
        report.diag("error", str(exc), kind="ParseError", position=exc.position)
        code = 2
    except (UnsupportedTerm, EvidenceDepthExceeded, TautologyTooLarge, canon.ClosureTooLarge, NotAxAppropriate) as exc:
        report.diag("error", str(exc), kind=type(exc).__name__)
        code = 2
    except LogicError as exc:
        report.diag("error", str(exc), kind=type(exc).__name__)
        code = 2
    except ValueError as exc:
        report.diag("error", str(exc))
        code = 2
    if code is None:
        code = 0 if report.ok else 1
    else:
        report.ok = False
    if args.json:
        stdout.write(json.dumps(report.envelope(), indent=2, sort_keys=True) + "\n")
    else:
        for line in report.text:
            stdout.write(line + "\n")
        for d in report.diagnostics:
            sys.stderr.write(f"{d['level']}: {d['message']}\n")
    return code


def main() -> None:
    sys.exit(run())
