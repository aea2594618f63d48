"""Command-line front end: ``realhilbert <command> <bundle.json> [flags]``.

Exit status: 0 when every check passes, 2 on a negative mathematical
verdict, 1 on malformed input.  With ``--json`` the report is itself a valid
bundle (``dim``/``matrices``/``tags`` plus a ``results`` object), so emitted
matrices re-load bit-equal through :func:`load_bundle`.
"""
from __future__ import annotations

import argparse
import itertools
import sys
from dataclasses import dataclass, field

import numpy as np

from . import lattice as lat
from .bundle import MatrixBundle, dumps, load_bundle
from .errors import (
    InputError,
    MissingGenerators,
    ParseError,
    RealHilbertError,
    UnknownCommand,
    VerdictError,
)
from .linalg import Tolerances, opnorm
from .poincare import (
    PoincareRep,
    boost_conjugation_check,
    check_relations,
    energy_momentum_bound,
    extract_complex_structure,
    poincare_invariance_residuals,
    squared_mass,
)
from .quantum_states import (
    density_from_measure,
    luders_update,
    measure_from_density,
    standard_frame,
    structured_trace,
    trace_in_structure,
)
from .spectral import polar, pvm_of
from .structures import ComplexStructure, QuaternionicPair
from .vnalg import classify, commutant

COMMANDS = ("commutant", "classify", "polar", "pvm", "lattice", "gleason",
            "extract-j", "poincare-check", "trace-factor")

# law residuals above this count as a failed verdict
LAW_TOL = 1e-8


@dataclass
class Flags:
    tol: Tolerances = field(default_factory=Tolerances)
    json: bool = False
    seed: int = 0
    c: float = 1.0


@dataclass
class Report:
    command: str
    dim: int
    results: dict = field(default_factory=dict)
    matrices: dict = field(default_factory=dict)
    exit_code: int = 0

    @property
    def passed(self) -> bool:
        return self.exit_code == 0

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "status": "pass" if self.passed else "fail",
            "exit_code": self.exit_code,
            "dim": self.dim,
            "results": self.results,
            "matrices": self.matrices,
            "tags": {},
        }

    def to_json(self) -> str:
        return dumps(self.as_dict()) + "\n"

    def to_text(self) -> str:
        lines = [f"{self.command}: {'pass' if self.passed else 'FAIL'}"]
        lines += _text_lines(self.results, "  ")
        with np.printoptions(precision=6, suppress=True, linewidth=100):
            for name, m in self.matrices.items():
                lines.append(f"  {name} =")
                lines += ["    " + row for row in np.array2string(m).splitlines()]
        return "\n".join(lines) + "\n"


def _text_lines(obj, indent: str) -> list[str]:
    out = []
    for k, v in obj.items():
        if isinstance(v, dict):
            out.append(f"{indent}{k}:")
            out += _text_lines(v, indent + "  ")
        elif isinstance(v, float):
            out.append(f"{indent}{k}: {v:.6g}")
        else:
            out.append(f"{indent}{k}: {getattr(v, 'value', v)}")
    return out


# -- input selection ----------------------------------------------------------

def _operands(bundle: MatrixBundle, *tags: str) -> dict:
    """Matrices with one of ``tags``, falling back to the untagged ones."""
    found = bundle.tagged(*tags) or bundle.untagged()
    if not found:
        raise ParseError(f"bundle has no matrices tagged {' or '.join(tags)} and no untagged ones")
    return found


def _generator_set(bundle: MatrixBundle) -> dict:
    return bundle.tagged("generator") or bundle.generators() or _operands(bundle, "generator")


def _rep(bundle: MatrixBundle, flags: Flags) -> PoincareRep:
    gens = bundle.generators()
    if not gens:
        raise MissingGenerators("bundle has no matrices tagged with generator labels p0..k3")
    return PoincareRep(gens, flags.c, flags.tol)


def _structure(bundle: MatrixBundle, tol: Tolerances):
    j = list(bundle.tagged("structure").values())
    k = list(bundle.tagged("structure2").values())
    if len(j) > 1 or len(k) > 1:
        raise ParseError("at most one matrix may be tagged 'structure' and one 'structure2'")
    if k and not j:
        raise ParseError("'structure2' needs a matching 'structure'")
    if not j:
        return None
    if k:
        return QuaternionicPair(ComplexStructure(j[0], tol), ComplexStructure(k[0], tol))
    return ComplexStructure(j[0], tol)


# -- commands -----------------------------------------------------------------

def _cmd_commutant(bundle, flags, rep):
    gens = _generator_set(bundle)
    comm = commutant(np.array(list(gens.values())), bundle.dim, flags.tol)
    rep.results = {
        "generators": ",".join(gens),
        "commutant_dim": comm.dim,
        "symmetric_dim": int(comm.symmetric_basis().shape[0]),
        "antisymmetric_dim": int(comm.antisymmetric_basis().shape[0]),
        "irreducible": comm.symmetric_basis().shape[0] == 1,
    }
    for i, b in enumerate(comm.basis):
        rep.matrices[f"commutant_{i}"] = b


def _cmd_classify(bundle, flags, rep):
    gens = _generator_set(bundle)
    cl = classify(np.array(list(gens.values())), bundle.dim, flags.tol)
    rep.results = {"kind": cl.kind.value, "commutant_dim": cl.commutant_dim,
                   "residuals": dict(cl.residuals)}
    if cl.j is not None:
        rep.matrices["J"] = cl.j.j
    if cl.k is not None:
        rep.matrices["K"] = cl.k.j
        rep.matrices["JK"] = cl.j.j @ cl.k.j


def _cmd_polar(bundle, flags, rep):
    n = bundle.dim
    for name, a in _operands(bundle, "operator").items():
        pd = polar(a, flags.tol)
        u, p = pd.u, pd.p
        anti = opnorm(a + a.T) <= flags.tol.eq_tol * max(1.0, opnorm(a))
        res = {
            "kernel_dim": pd.kernel_dim,
            "factorization_residual": opnorm(a - u @ p),
            "p_symmetric_residual": opnorm(p - p.T),
            "partial_isometry_residual": opnorm(u.T @ u @ u.T @ u - u.T @ u),
            "orthogonal": pd.kernel_dim == 0 and opnorm(u.T @ u - np.eye(n)) <= flags.tol.eq_tol,
            "antisymmetric_input": bool(anti),
        }
        if anti:
            res["u_antisymmetric_residual"] = opnorm(u + u.T)
        rep.results[name] = res
        rep.matrices[f"{name}.u"] = u
        rep.matrices[f"{name}.p"] = p
        if res["factorization_residual"] > LAW_TOL * max(1.0, opnorm(a)):
            rep.exit_code = 2


def _cmd_pvm(bundle, flags, rep):
    for name, a in _operands(bundle, "operator").items():
        pvm = pvm_of(a, flags.tol)
        recon = sum(lam * p for lam, p in zip(pvm.eigenvalues, pvm.projectors))
        rep.results[name] = {
            "eigenvalues": [float(x) for x in pvm.eigenvalues],
            "ranks": [int(r) for r in pvm.ranks],
            "reconstruction_residual": opnorm(0.5 * (a + a.T) - recon),
        }
        for i, p in enumerate(pvm.projectors):
            rep.matrices[f"{name}.P{i}"] = p


def _random_subprojector(q: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    w, v = np.linalg.eigh(q)
    basis = v[:, w > 0.5]
    r = basis.shape[1]
    if r == 0:
        return np.zeros_like(q)
    k = int(rng.integers(0, r + 1))
    sub = basis @ np.linalg.qr(rng.standard_normal((r, r)))[0][:, :k]
    return sub @ sub.T


def _cmd_lattice(bundle, flags, rep):
    tol = flags.tol
    projs = {name: lat.as_projector(p, tol) for name, p in _operands(bundle, "projector").items()}
    names = list(projs)
    worst = 0.0
    for name, p in projs.items():
        rep.results[name] = {"rank": lat.projector_rank(p, tol)}
        rep.matrices[f"{name}.perp"] = lat.orthocomplement(p, tol)
    for a, b in itertools.combinations(names, 2):
        p, q = projs[a], projs[b]
        meet, join = lat.meet(p, q, tol), lat.join(p, q, tol)
        res = {
            "commutes": lat.commutes(p, q, tol),
            "leq": lat.leq(p, q, tol),
            "geq": lat.leq(q, p, tol),
            "meet_rank": lat.projector_rank(meet, tol),
            "join_rank": lat.projector_rank(join, tol),
        }
        for lo, hi, key in ((p, q, "orthomodularity_residual"), (q, p, "orthomodularity_residual_rev")):
            if lat.leq(lo, hi, tol):
                res[key] = lat.check_orthomodularity(lo, hi, tol)
                worst = max(worst, res[key])
        rep.results[f"{a}|{b}"] = res
        rep.matrices[f"{a}^{b}"] = meet
        rep.matrices[f"{a}v{b}"] = join
    for a, b, c in itertools.combinations(names, 3):
        rep.results[f"{a}|{b}|{c}"] = {
            "distributivity_residual": lat.distributivity_residual(projs[a], projs[b], projs[c], tol)}
    # seeded sweep: random p <= q for every given q
    rng = np.random.default_rng(flags.seed)
    sweep = 0.0
    for q in projs.values():
        for _ in range(20):
            p = _random_subprojector(q, rng)
            sweep = max(sweep, lat.check_orthomodularity(p, q, tol))
    rep.results["orthomodularity_sweep"] = {"seed": flags.seed, "samples": 20 * len(projs),
                                            "max_residual": sweep}
    if max(worst, sweep) > LAW_TOL:
        rep.exit_code = 2


def _cmd_gleason(bundle, flags, rep):
    tol = flags.tol
    dens = bundle.tagged("density") or bundle.untagged()
    if len(dens) != 1:
        raise ParseError("gleason needs exactly one matrix tagged 'density' (or one untagged matrix)")
    (name, t), = dens.items()
    n = bundle.dim
    table = {k: measure_from_density(t, p, tol) for k, p in standard_frame(n).items()}
    recon = density_from_measure(table, n, tol)
    err = float(np.max(np.abs(recon - t)))
    rep.results["density"] = name
    rep.results["frame"] = {"/".join(map(str, k)): v for k, v in table.items()}
    rep.results["round_trip_error"] = err
    rep.matrices["reconstructed"] = recon
    for pname, p in bundle.tagged("projector").items():
        prob = measure_from_density(t, p, tol)
        rep.results[f"{pname}.probability"] = prob
        if prob > tol.eq_tol:
            rep.matrices[f"{pname}.luders"] = luders_update(t, p, tol)
    if err > LAW_TOL:
        rep.exit_code = 2


def _cmd_extract_j(bundle, flags, rep):
    r = _rep(bundle, flags)
    es = extract_complex_structure(r)
    rep.results = {
        "c": r.c,
        "hamiltonian_residual": es.hamiltonian_residual,
        "commutation_residuals": dict(es.commutation_residuals),
        "observable_asymmetry": dict(es.observable_asymmetry),
        "invariance_residuals": {str(k): v for k, v in poincare_invariance_residuals(r, es.j).items()},
        "uniqueness": es.uniqueness_verdict.value if es.uniqueness is not None else None,
        "commutant_dim": es.uniqueness.commutant_dim if es.uniqueness is not None else None,
        "uniqueness_reason": es.uniqueness.reason if es.uniqueness is not None else "",
    }
    rep.matrices["J"] = es.j.j
    rep.matrices["H"] = es.h
    for lab, o in es.observables.items():
        rep.matrices[f"O_{lab}"] = o
    if es.uniqueness is not None and es.uniqueness.witness is not None:
        rep.matrices["witness"] = es.uniqueness.witness
    if max(es.commutation_residuals.values()) > LAW_TOL * max(1.0, max(map(opnorm, r.gens.values()))):
        rep.exit_code = 2


def _cmd_poincare_check(bundle, flags, rep):
    r = _rep(bundle, flags)
    rel = check_relations(r)
    rep.results["relations"] = {
        "passed": rel.passed,
        "trivial": rel.trivial,
        "max_residual": rel.max_residual,
        "threshold": rel.threshold,
        "failing": ",".join(rel.failing),
        "skipped": len(rel.skipped),
        "residuals": dict(rel.residuals),
    }
    ok = rel.passed
    if all(f"p{mu}" in r.gens for mu in range(4)):
        sm = squared_mass(r)
        rep.results["squared_mass"] = {"scalar": sm.scalar, "nonnegative": sm.positive}
        rep.matrices["M2"] = sm.matrix
    if "p0" in r.gens:
        boosts = {}
        for i in (1, 2, 3):
            if f"p{i}" in r.gens and f"k{i}" in r.gens:
                boosts[f"k{i}"] = boost_conjugation_check(r, i, 0.5)
        if boosts:
            rep.results["boost_conjugation_residuals"] = boosts
            ok = ok and max(boosts.values()) <= LAW_TOL * max(1.0, opnorm(r.gens["p0"]))
        if any(f"p{i}" in r.gens for i in (1, 2, 3)):
            bound = energy_momentum_bound(r, seed=flags.seed)
            rep.results["energy_momentum_bound"] = {k: v for k, v in bound.items()
                                                    if not isinstance(v, np.ndarray)}
    if not ok:
        rep.exit_code = 2


def _cmd_trace_factor(bundle, flags, rep):
    s = _structure(bundle, flags.tol)
    factor = {type(None): 1.0, ComplexStructure: 0.5, QuaternionicPair: 0.25}[type(s)]
    for name, a in _operands(bundle, "operator").items():
        value = trace_in_structure(a, s, flags.tol)
        rep.results[name] = {
            "factor": factor,
            "trace": float(np.trace(a)),
            "structured_trace": value,
            "explicit_basis_trace": structured_trace(a, s, flags.tol),
        }


_DISPATCH = {
    "commutant": _cmd_commutant,
    "classify": _cmd_classify,
    "polar": _cmd_polar,
    "pvm": _cmd_pvm,
    "lattice": _cmd_lattice,
    "gleason": _cmd_gleason,
    "extract-j": _cmd_extract_j,
    "poincare-check": _cmd_poincare_check,
    "trace-factor": _cmd_trace_factor,
}


def run_command(cmd: str, bundle: MatrixBundle, flags: Flags | None = None) -> Report:
    """Run one analysis.  Module errors are re-raised with the command name prefixed."""
    if cmd not in _DISPATCH:
        raise UnknownCommand(f"unknown command {cmd!r}; expected one of {', '.join(COMMANDS)}")
    flags = flags or Flags()
    rep = Report(cmd, bundle.dim)
    try:
        _DISPATCH[cmd](bundle, flags, rep)
    except RealHilbertError as exc:
        raise type(exc)(f"{cmd}: {exc}") from exc
    return rep


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="realhilbert", description="Finite-dimensional real Hilbert space analyses.")
    p.add_argument("command", help="one of: " + ", ".join(COMMANDS))
    p.add_argument("bundle", help="path to a JSON matrix bundle")
    p.add_argument("--tol", type=float, default=None, help="override the equality tolerance")
    p.add_argument("--json", action="store_true", help="emit structured JSON output")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    p.add_argument("--c", type=float, default=1.0, help="speed of light (extract-j, poincare-check)")
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command not in _DISPATCH:
            raise UnknownCommand(f"unknown command {args.command!r}; expected one of "
                                 f"{', '.join(COMMANDS)}")
        tol = Tolerances() if args.tol is None else Tolerances(eq_tol=args.tol)
        flags = Flags(tol=tol, json=args.json, seed=args.seed, c=args.c)
        bundle = load_bundle(args.bundle)
        report = run_command(args.command, bundle, flags)
    except VerdictError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        if "args" in locals() and args.json:
            print(dumps({"command": args.command, "status": "fail", "exit_code": 2,
                         "error": {"type": type(exc).__name__, "message": str(exc)}}))
        return 2
    except (InputError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(report.to_json() if flags.json else report.to_text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
