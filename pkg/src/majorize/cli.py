"""Command-line front end.

Exit status: 0 when the predicate holds or the operation succeeded, 1 when
the predicate is false (not majorized, not CP, class Other, failures found),
2 for usage or input errors, 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import channels as ch
from . import config
from . import io
from . import linalg as la
from . import majorization as mj
from . import properties as pe
from .errors import MajorizeError

COMMANDS = (
    "majorize",
    "witness",
    "birkhoff",
    "choi",
    "check-cp",
    "make-channel",
    "classify",
    "test-preserve",
    "test-orbit",
    "entropy",
    "explore-conjecture",
)


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return f"{x:.12g}"


def fmt_complex(z: complex) -> str:
    if z.imag == 0:
        return fmt(z.real)
    return f"{fmt(z.real)}{'+' if z.imag >= 0 else '-'}{fmt(abs(z.imag))}j"


def fmt_matrix(m, indent: str = "  ") -> str:
    m = np.asarray(m)
    if np.iscomplexobj(m) and np.all(m.imag == 0):
        m = m.real
    rows = []
    for row in m:
        cells = [fmt_complex(complex(x)) if np.iscomplexobj(m) else fmt(float(x)) for x in row]
        rows.append(indent + "[" + ", ".join(cells) + "]")
    return "\n".join(rows)


# --------------------------------------------------------------------------
# input helpers
# --------------------------------------------------------------------------


class Inputs:
    """Resolves named inputs from inline JSON flags, ``--file`` or stdin."""

    def __init__(self, args: argparse.Namespace, stdin):
        self.args = args
        self.stdin = stdin
        self._file_doc = None

    def file_doc(self):
        if self._file_doc is None and getattr(self.args, "file", None):
            with open(self.args.file, encoding="utf-8") as fh:
                self._file_doc = json.load(fh)
        return self._file_doc

    def get(self, name: str, required: bool = True):
        inline = getattr(self.args, name, None)
        if inline is not None:
            return json.loads(inline)
        doc = self.file_doc()
        if isinstance(doc, dict) and name in doc:
            return doc[name]
        if required:
            raise UsageError(f"missing input --{name} (inline JSON or a key of --file)")
        return None

    def document(self, name: str = "channel"):
        inline = getattr(self.args, name, None)
        if inline is not None:
            return json.loads(inline)
        doc = self.file_doc()
        if doc is not None:
            return doc
        text = self.stdin.read()
        if not text.strip():
            raise UsageError(f"no {name} document given (use --{name}, --file or stdin)")
        return json.loads(text)

    def channel(self) -> ch.KrausChannel:
        return io.channel_from_doc(self.document("channel"))


def resolve_seed(args, err) -> int:
    if args.seed is not None:
        return int(args.seed)
    seed = secrets.randbits(32)
    print(f"seed: {seed}", file=err)
    return seed


# --------------------------------------------------------------------------
# subcommands; each returns (exit code, json document, human text)
# --------------------------------------------------------------------------


def cmd_majorize(args, inp: Inputs, tol: config.Tolerances, err):
    t = tol.majorization if args.tol is None else args.tol
    if inp.get("a", required=False) is not None:
        a = io.matrix_from_json(inp.get("a"))
        b = io.matrix_from_json(inp.get("b"))
        ok = mj.majorizes_op(a, b, t)
        gaps = mj.majorization_gaps(la.spectrum(a), la.spectrum(b))
        label = "A ≺ B"
    else:
        u = io.vector_from_json(inp.get("u"))
        v = io.vector_from_json(inp.get("v"))
        ok = mj.majorizes_vec(u, v, t)
        gaps = mj.majorization_gaps(u, v)
        label = "u ≺ v"
    doc = {"majorized": ok, "prefix_gaps": gaps.tolist(), "tol": t}
    return (0 if ok else 1), doc, f"{label}: {str(ok).lower()}"


def cmd_witness(args, inp: Inputs, tol, err):
    t = tol.majorization if args.tol is None else args.tol
    if inp.get("a", required=False) is not None:
        a = io.matrix_from_json(inp.get("a"))
        b = io.matrix_from_json(inp.get("b"))
        w = mj.mixed_unitary_witness(a, b, t)
        recon = la.max_abs(w.apply(b) - a)
        doc = dict(io.witness_to_doc(w), reconstruction_error=recon)
        lines = [f"mixed-unitary witness with {len(w.terms)} terms"]
        for p, u in w.terms:
            lines.append(f"weight {fmt(p)}:\n{fmt_matrix(u)}")
        lines.append(f"reconstruction error: {recon:.3g}")
        return 0, doc, "\n".join(lines)
    u = io.vector_from_json(inp.get("u"))
    v = io.vector_from_json(inp.get("v"))
    b = mj.hlp_witness(u, v, t)
    recon = float(np.max(np.abs(b @ v - u)))
    doc = {"B": io.real_matrix_to_json(b), "residual": recon}
    return 0, doc, f"B (B v = u):\n{fmt_matrix(b)}\nresidual: {recon:.3g}"


def cmd_birkhoff(args, inp: Inputs, tol, err):
    t = tol.birkhoff if args.tol is None else args.tol
    b = io.real_matrix_from_json(inp.get("matrix"))
    d = mj.birkhoff_decompose(b, t)
    recon = la.max_abs(d.reconstruct() - b)
    doc = dict(io.birkhoff_to_doc(d), reconstruction_error=recon)
    lines = [f"{len(d.terms)} terms"]
    lines += [f"  {fmt(w)}  {list(p.image)}" for w, p in d.terms]
    lines.append(f"reconstruction error: {recon:.3g}")
    return 0, doc, "\n".join(lines)


def cmd_choi(args, inp: Inputs, tol, err):
    j = ch.choi(inp.channel())
    doc = io.choi_to_doc(j)
    return 0, doc, io.dumps(doc)


def cmd_check_cp(args, inp: Inputs, tol, err):
    t = tol.cp if args.tol is None else args.tol
    doc_in = inp.document("channel")
    if isinstance(doc_in, dict) and "choi" in doc_in:
        j = io.choi_from_doc(doc_in)
    else:
        j = ch.choi(io.channel_from_doc(doc_in)).matrix
    j = la.as_hermitian(j, 1e-9)
    low = ch.min_choi_eigenvalue(j)
    cp = low >= -t
    tp = ch.is_tp(j, tol.choi_tp)
    doc = {"cp": cp, "tp": tp, "min_choi_eigenvalue": low, "tol": t}
    text = f"CP: {str(cp).lower()}\nTP: {str(tp).lower()}\nmin Choi eigenvalue: {fmt(low)}"
    return (0 if cp and tp else 1), doc, text


def _unitary_or_haar(inp: Inputs, n: int, rng) -> np.ndarray:
    given = inp.get("unitary", required=False)
    if given is not None:
        return io.matrix_from_json(given)
    return la.random_haar_unitary(n, rng)


def cmd_make_channel(args, inp: Inputs, tol, err):
    kind = args.kind
    n = args.dim
    random_input = {
        "dep-unitary": "unitary",
        "dep-transpose": "unitary",
        "constant": "omega",
        "random-unital": None,
    }
    stochastic = kind in random_input and (
        random_input[kind] is None or inp.get(random_input[kind], required=False) is None
    )
    seed = resolve_seed(args, err) if stochastic else 0
    rng = la.make_rng(seed)

    def need(value, flag):
        if value is None:
            raise UsageError(f"--kind {kind} needs {flag}")
        return value

    if kind == "dep-unitary":
        u = _unitary_or_haar(inp, need(n, "--dim"), rng)
        channel = ch.depolarized_unitary(need(args.lam, "--lambda"), u)
    elif kind == "dep-transpose":
        u = _unitary_or_haar(inp, need(n, "--dim"), rng)
        channel = ch.depolarized_transpose(need(args.lam, "--lambda"), u)
    elif kind == "constant":
        omega = inp.get("omega", required=False)
        omega = io.matrix_from_json(omega) if omega is not None else la.random_density(need(n, "--dim"), seed=rng)
        channel = ch.constant_channel(omega)
    elif kind == "depolarizing":
        channel = ch.completely_depolarizing(need(n, "--dim"))
    elif kind == "identity":
        channel = ch.identity_channel(need(n, "--dim"))
    elif kind == "amplitude-damping":
        channel = ch.amplitude_damping(need(args.gamma, "--gamma"))
    elif kind == "random-unital":
        channel = pe.random_unital_channel(need(n, "--dim"), rng, n_kraus=args.kraus_count)
    else:  # argparse restricts choices
        raise UsageError(f"unknown kind {kind}")
    doc = io.channel_to_doc(channel)
    return 0, doc, io.dumps(doc)


def cmd_classify(args, inp: Inputs, tol, err):
    t = tol.classifier if args.tol is None else args.tol
    channel = inp.channel()
    cls = ch.classify_channel(channel, t)
    doc = io.classification_to_doc(cls)
    lines = [f"class: {cls.tag}"]
    if isinstance(cls, ch.Constant):
        lines.append(f"omega:\n{fmt_matrix(cls.omega)}")
    elif isinstance(cls, (ch.DepUnitary, ch.DepTranspose)):
        lines.append(f"lambda: {fmt(cls.lam)}")
        lines.append(f"U:\n{fmt_matrix(cls.unitary)}")
        for alt in cls.alternatives:
            lines.append(f"also {alt.tag} with lambda: {fmt(alt.lam)}")
    else:
        lines.append(f"min Choi eigenvalue: {fmt(cls.min_choi_eigenvalue)}")
        lines.append(f"spectrum residual: {fmt(cls.spectrum_residual)}")
    return (1 if isinstance(cls, ch.Other) else 0), doc, "\n".join(lines)


def _report_text(report: pe.TrialReport) -> str:
    lines = [
        f"trials: {report.trials}",
        f"failures: {report.failures}",
        f"seed: {report.seed}",
        f"elapsed: {report.elapsed_s:.3f} s",
    ]
    if report.counterexample is not None:
        c = report.counterexample
        lines.append(f"first counterexample at trial {c.trial}")
        lines.append(f"rho:\n{fmt_matrix(c.rho)}")
        lines.append(f"sigma:\n{fmt_matrix(c.sigma)}")
        for key, value in c.diagnostics.items():
            if isinstance(value, np.ndarray):
                value = "[" + ", ".join(fmt(float(x)) for x in value) + "]"
            elif isinstance(value, float):
                value = fmt(value)
            lines.append(f"{key}: {value}")
    return "\n".join(lines)


def cmd_test_preserve(args, inp: Inputs, tol, err):
    t = tol.majorization if args.tol is None else args.tol
    channel = inp.channel()
    seed = resolve_seed(args, err)
    report = pe.test_preservation(channel, args.trials, seed, t)
    return (0 if report.passed else 1), io.report_to_doc(report), _report_text(report)


def cmd_test_orbit(args, inp: Inputs, tol, err):
    t = tol.spectra if args.tol is None else args.tol
    channel = inp.channel()
    rho0 = inp.get("rho0", required=False)
    spec = inp.get("spectrum", required=False)
    if rho0 is not None:
        rho0 = io.matrix_from_json(rho0)
    elif spec is not None:
        rho0 = np.diag(io.vector_from_json(spec)).astype(np.complex128)
    else:
        rho0 = pe.default_rho0(channel.dim)
    seed = resolve_seed(args, err)
    report = pe.test_orbit_preservation(channel, rho0, args.trials, seed, t)
    return (0 if report.passed else 1), io.report_to_doc(report), _report_text(report)


def cmd_entropy(args, inp: Inputs, tol, err):
    rho = inp.get("rho", required=False)
    if rho is not None:
        rho = io.matrix_from_json(rho)
    else:
        rho = np.diag(io.vector_from_json(inp.get("spectrum"))).astype(np.complex128)
    s = pe.von_neumann_entropy(rho)
    return 0, {"entropy_bits": s}, f"S(rho) = {fmt(s)} bits"


def cmd_explore(args, inp: Inputs, tol, err):
    seed = resolve_seed(args, err)
    summary = pe.conjecture_explorer(
        args.dim, args.channels, args.trials, seed, form_samples=args.forms, n_kraus=args.kraus_count
    )
    text = f"d = {summary.dim}, seed = {summary.seed}, rho0 spectrum = {list(summary.rho0_spectrum)}\n"
    text += summary.table()
    return 0, io.explorer_to_doc(summary), text


HANDLERS: Dict[str, Callable] = {
    "majorize": cmd_majorize,
    "witness": cmd_witness,
    "birkhoff": cmd_birkhoff,
    "choi": cmd_choi,
    "check-cp": cmd_check_cp,
    "make-channel": cmd_make_channel,
    "classify": cmd_classify,
    "test-preserve": cmd_test_preserve,
    "test-orbit": cmd_test_orbit,
    "entropy": cmd_entropy,
    "explore-conjecture": cmd_explore,
}

DOCUMENT_COMMANDS = {"choi", "make-channel"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON document on stdout")
    common.add_argument("--file", help="JSON file holding the inputs")
    common.add_argument("--tol", type=float, help="override the tolerance used by this command")

    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, help="master seed; random (and printed) if omitted")

    chan = argparse.ArgumentParser(add_help=False)
    chan.add_argument("--channel", help="inline channel JSON document (default: --file or stdin)")

    parser = argparse.ArgumentParser(prog="majorize", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("majorize", parents=[common], help="test u ≺ v or A ≺ B")
    p.add_argument("--u")
    p.add_argument("--v")
    p.add_argument("--a")
    p.add_argument("--b")

    p = sub.add_parser("witness", parents=[common], help="bistochastic or mixed-unitary witness")
    p.add_argument("--u")
    p.add_argument("--v")
    p.add_argument("--a")
    p.add_argument("--b")

    p = sub.add_parser("birkhoff", parents=[common], help="Birkhoff decomposition of a bistochastic matrix")
    p.add_argument("--matrix")

    sub.add_parser("choi", parents=[common, chan], help="Choi matrix of a channel")

    p = sub.add_parser("check-cp", parents=[common, chan], help="CP/TP check of a channel or Choi document")

    p = sub.add_parser("make-channel", parents=[common, seeded], help="construct a channel document")
    p.add_argument(
        "--kind",
        required=True,
        choices=["dep-unitary", "dep-transpose", "constant", "depolarizing", "identity", "amplitude-damping", "random-unital"],
    )
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--dim", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--unitary", help="inline JSON matrix; Haar random from --seed if omitted")
    p.add_argument("--omega", help="inline JSON density matrix for --kind constant")
    p.add_argument("--kraus-count", type=int, default=2)

    sub.add_parser("classify", parents=[common, chan], help="which preserving family a channel belongs to")

    p = sub.add_parser("test-preserve", parents=[common, chan, seeded], help="Monte-Carlo majorization preservation")
    p.add_argument("--trials", type=int, default=1000)

    p = sub.add_parser("test-orbit", parents=[common, chan, seeded], help="Monte-Carlo unitary-orbit preservation")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--rho0", help="inline JSON matrix (default diag(d, ..., 1) normalized)")
    p.add_argument("--spectrum", help="inline JSON vector; rho0 = diag(spectrum)")

    p = sub.add_parser("entropy", parents=[common], help="von Neumann entropy in bits")
    p.add_argument("--rho")
    p.add_argument("--spectrum")

    p = sub.add_parser("explore-conjecture", parents=[common, seeded], help="orbit preservation survey at d >= 3")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--channels", type=int, default=20)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--forms", type=int, default=2, help="random members per family besides the boundary ones")
    p.add_argument("--kraus-count", type=int, default=2)
    return parser


def run(argv: Optional[Sequence[str]] = None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(sys.argv[1:] if argv is None else argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        tol = config.from_env()
        inp = Inputs(args, stdin)
        code, doc, text = HANDLERS[args.command](args, inp, tol, stderr)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=stderr)
        return 2
    except (json.JSONDecodeError, OSError, UnicodeDecodeError) as exc:
        print(f"{parser.prog} {args.command}: cannot read input: {exc}", file=stderr)
        return 2
    except MajorizeError as exc:
        print(f"{type(exc).__name__}: {exc}", file=stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=stderr)
        return 2
    if args.json or args.command in DOCUMENT_COMMANDS:
        print(io.dumps(doc), file=stdout)
    else:
        print(text, file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
