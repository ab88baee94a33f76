"""The invariant suite run by ``ortho2c verify``.

Every check records a measured value next to its tolerance.  Values are
relative to the natural scale of the quantity unless the name says otherwise.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass

import numpy as np

from . import basis as B
from . import bridge, families, kernels, recurrence, zeros
from .polycore import eval_rows, graded_size
from .sampling import DEFAULT_SEED, sample_pairs, sample_points
from .weights import WeightSpec, moment_matrix

DEFAULT_TOL = 1e-9
CUBATURE_MAX_DEGREE = 5


def default_tolerance() -> float:
    """``ORTHO2C_TOL`` when set, else ``DEFAULT_TOL``."""
    raw = os.environ.get("ORTHO2C_TOL")
    if raw is None:
        return DEFAULT_TOL
    tol = float(raw)
    if not tol > 0:
        raise ValueError("ORTHO2C_TOL must be positive")
    return tol


@dataclass
class Check:
    name: str
    value: float
    tol: float
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        out = asdict(self)
        out["value"] = float(self.value)
        return out


def _rel(diff, ref) -> float:
    diff = np.max(np.abs(diff)) if np.size(diff) else 0.0
    ref = np.max(np.abs(ref)) if np.size(ref) else 0.0
    return float(diff / max(ref, 1.0))


class Suite:
    def __init__(self, w: WeightSpec, max_degree: int, seed: int = DEFAULT_SEED, tol: float | None = None):
        if max_degree < 1:
            raise ValueError("max_degree must be at least 1")
        self.w = w
        self.N = max_degree
        self.seed = seed
        self.tol = default_tolerance() if tol is None else tol
        self.checks: list[Check] = []

    def record(self, name, value, tol, passed=None, detail=""):
        value = float(value)
        ok = bool(value <= tol) if passed is None else bool(passed)
        self.checks.append(Check(name, value, tol, ok, detail))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def run(self) -> "Suite":
        steps = [
            self._moments,
            self._basis,
            self._families,
            self._bridge,
            self._recurrence,
            self._kernels,
            self._zeros,
            self._cubature,
        ]
        for step in steps:
            try:
                step()
            except Exception as exc:  # a crashing step is a failed check, not a crashed suite
                self.checks.append(Check(step.__name__.strip("_") + ".error", float("nan"), 0.0, False, f"{type(exc).__name__}: {exc}"))
        return self

    # individual groups

    def _moments(self):
        mm = moment_matrix(self.w, self.N)
        scale = np.max(np.abs(mm.matrix))
        self.record("moments.hermitian", mm.hermitian_residual() / scale, 1e-12)
        self.record("moments.jmj_symmetry", mm.symmetry_residual() / scale, 1e-12)
        ev = np.linalg.eigvalsh(mm.matrix)
        self.record("moments.positive_definite", ev[0] / ev[-1], 1e-12, passed=ev[0] > 1e-12 * ev[-1])

    def _basis(self):
        w, N = self.w, self.N
        monic = B.monic_basis(w, N)
        ortho = B.orthonormal_basis(w, N)
        worst = 0.0
        for n in range(1, min(4, N) + 1):
            for k in range(n + 1):
                oracle = B.determinant_oracle(w, k, n).to_vector(n)
                worst = max(worst, _rel(monic[n].coeffs[k] - oracle, oracle))
        self.record("basis.determinant_oracle", worst, 1e-8)
        rows = np.vstack([lv.padded(N) for lv in ortho])
        gram = B.inner_products(w, rows, rows)
        self.record("basis.orthonormality", np.max(np.abs(gram - np.eye(gram.shape[0]))), self.tol)
        pts = sample_points(w, 50, self.seed)
        sym = max(lv.conjugation_residual(pts) / max(1.0, np.max(np.abs(lv(pts)))) for lv in ortho)
        self.record("basis.conjugation_symmetry", sym, 1e-10)

    def _families(self):
        w, N = self.w, self.N
        name = {"hermite": "hermite_complex", "disk": "disk_complex", "deltoid_first": "deltoid_T", "deltoid_second": "deltoid_U"}.get(w.kind)
        if name is None:
            return
        monic = B.monic_basis(w, N)
        worst = 0.0
        for n in range(N + 1):
            fam = B.leading_normalized(families.complex_family(name, n, w.lam), n)
            for k, p in enumerate(fam):
                v = p.to_vector(n)
                worst = max(worst, _rel(monic[n].coeffs[k] - v, v))
        self.record("families.closed_form_vs_moments", worst, 1e-8)
        if w.kind == "hermite":
            pts = sample_points(w, 50, self.seed)
            err = 0.0
            for k in range(6):
                for j in range(k + 1):
                    ref = families.hermite_complex(k, j)(pts)
                    err = max(err, _rel(families.hermite_laguerre_value(k, j, pts) - ref, ref))
            self.record("families.hermite_laguerre_form", err, 1e-10)

    def _bridge(self):
        w, N = self.w, self.N
        worst = max(max(bridge.build_L(n).unitarity_residual(), bridge.build_L(n).transpose_residual()) for n in range(N + 2))
        self.record("bridge.L_identities", worst, 1e-14)
        ortho = B.orthonormal_basis(w, N)
        real = [bridge.real_level(lv) for lv in ortho]
        rows = np.vstack([np.pad(r.coeffs, ((0, 0), (0, graded_size(N) - r.coeffs.shape[1]))) for r in real])
        gram = B.inner_products(w, rows, rows)
        self.record("bridge.real_orthonormality", np.max(np.abs(gram - np.eye(gram.shape[0]))), self.tol)
        pts = sample_points(w, 50, self.seed)
        err = 0.0
        for lv, r in zip(ortho, real):
            q = lv(pts)
            lp = bridge.build_L(lv.n).entries @ r(pts.real, pts.imag)
            err = max(err, _rel(q - lp, q))
        self.record("bridge.Q_equals_LP", err, 1e-10)

    def _recurrence(self):
        w, N = self.w, self.N
        ortho = B.orthonormal_basis(w, N)
        data = recurrence.extract_complex_three_term(w, ortho, self.seed)
        self.record("recurrence.reconstruction", data.residual, self.tol)
        self.record("recurrence.gamma_vee_alpha_star", recurrence.check_gamma_alpha(data), 10 * self.tol)
        monic = B.monic_basis(w, N)
        mdata = recurrence.extract_complex_three_term(w, monic, self.seed)
        self.record("recurrence.gamma_alpha_monic", recurrence.check_gamma_alpha(mdata, [lv.gram for lv in monic]), 10 * self.tol)
        if w.centrally_symmetric:
            self.record("recurrence.beta_zero", recurrence.beta_residual(data), 1e-10)
        reports = [recurrence.favard_rank_check(a) for a in data.alpha]
        self.record("recurrence.favard_ranks", sum(not r["pass"] for r in reports), 0)
        r1, r2, r3 = recurrence.commuting_check(data)
        self.record("recurrence.commuting", max(r1, r2, r3), self.tol)
        pts = sample_points(w, 50, self.seed)
        vals = B.evaluate_levels(ortho, pts)
        err = 0.0
        for n in range(len(data.alpha)):
            rhs = recurrence.vee(data.alpha[n]) @ vals[n + 1] + recurrence.vee(data.beta[n]) @ vals[n]
            if n >= 1:
                rhs = rhs + recurrence.vee(data.gamma[n - 1]) @ vals[n - 1]
            lhs = np.conj(pts) * vals[n]
            err = max(err, _rel(lhs - rhs, lhs))
        self.record("recurrence.conjugated_relation", err, self.tol)
        real = [bridge.real_level(lv) for lv in ortho]
        dx, dy = recurrence.extract_real_three_term(w, real, self.seed)
        diff = 0.0
        for n in range(len(data.alpha)):
            a, b = recurrence.translate_coeffs(dx.alpha[n], dx.beta[n], dy.alpha[n], dy.beta[n], bridge.build_L(n), bridge.build_L(n + 1))
            diff = max(diff, np.max(np.abs(a - data.alpha[n])), np.max(np.abs(b - data.beta[n])))
        self.record("recurrence.translate_vs_direct", diff, self.tol)

    def _kernels(self):
        w, N = self.w, self.N
        ortho = B.orthonormal_basis(w, N)
        real = [bridge.real_level(lv) for lv in ortho]
        data = recurrence.extract_complex_three_term(w, ortho, self.seed)
        dx, dy = recurrence.extract_real_three_term(w, real, self.seed)
        z, zeta = sample_pairs(w, 100, self.seed)
        zx, zy, wx, wy = z.real, z.imag, zeta.real, zeta.imag
        eq = im = cd = cdr = 0.0
        for n in range(N):
            k = kernels.kernel_complex(ortho, n, z, zeta)
            kr = kernels.kernel_real(real, n, (zx, zy), (wx, wy))
            eq = max(eq, _rel(k - kr, k))
            im = max(im, _rel(k.imag, k))
            cd = max(cd, _rel(kernels.cd_kernel_complex(ortho, data.alpha[n], z, zeta) - k, k))
            for axis, d in ((1, dx), (2, dy)):
                cdr = max(cdr, _rel(kernels.cd_kernel_real(real, d.alpha[n], (zx, zy), (wx, wy), axis) - kr, kr))
        self.record("kernels.complex_equals_real", eq, 1e-10)
        self.record("kernels.real_valued", im, 1e-10)
        self.record("kernels.cd_complex", cd, self.tol)
        self.record("kernels.cd_real_axes", cdr, self.tol)
        # reproduction: sum_j <f, Q_j> Q_j(z) = f(z) for f in the span
        rng = np.random.default_rng(self.seed)
        rows = np.vstack([lv.padded(N) for lv in ortho])
        coef = rng.normal(size=rows.shape[0]) + 1j * rng.normal(size=rows.shape[0])
        f = (coef @ rows)[None, :]
        proj = B.inner_products(w, f, rows)[0]
        fz = eval_rows(f, z)[0]
        rebuilt = proj @ eval_rows(rows, z)
        self.record("kernels.reproduction", _rel(rebuilt - fz, fz), 1e-7)
        if w.kind == "disk" and w.lam > -0.5:
            err = 0.0
            for n in range(min(N, 4) + 1):
                ref = kernels.kernel_slice(ortho, n, z, zeta)
                err = max(err, _rel(kernels.disk_kernel_gegenbauer(w.lam, n, z, zeta) - ref, ref))
            self.record("kernels.disk_gegenbauer", err, 1e-6)

    def _zeros(self):
        w, N = self.w, self.N
        ortho = B.orthonormal_basis(w, N)
        data = recurrence.extract_complex_three_term(w, ortho, self.seed)
        too_many = consistency = pattern = 0
        resid = 0.0
        conj_gap = 0.0
        for n in range(1, N + 1):
            found = zeros.common_zeros(w, n, data)
            if len(found) > graded_size(n - 1):
                too_many += 1
            for z in found:
                resid = max(resid, zeros._residual(ortho[n].coeffs, z))
            maximal = zeros.max_zero_condition(data.alpha[n - 1])
            if maximal != (len(found) == graded_size(n - 1)):
                consistency += 1
            if w.centrally_symmetric:
                expect = [0j] if n % 2 else []
                if len(found) != len(expect) or any(abs(a - b) > 1e-8 for a, b in zip(found, expect)):
                    pattern += 1
            evals, _ = zeros.jacobi_eigen(zeros.jacobi_operator(data, n))
            for group in zeros._clusters(evals, zeros.CLUSTER_TOL):
                mean = np.mean(evals[group])
                conj_gap = max(conj_gap, np.min(np.abs(evals - np.conj(mean))) if len(group) == 1 else 0.0)
        self.record("zeros.at_most_maximal", too_many, 0)
        self.record("zeros.residual", resid, 1e-8)
        self.record("zeros.count_matches_condition", consistency, 0)
        self.record("zeros.conjugate_pairs", conj_gap, 1e-9)
        if w.centrally_symmetric:
            self.record("zeros.central_symmetry_pattern", pattern, 0)

    def _cubature(self):
        w, N = self.w, self.N
        if w.kind == "custom":
            return
        ortho = B.orthonormal_basis(w, N)
        data = recurrence.extract_complex_three_term(w, ortho, self.seed)
        worst = 0.0
        built = 0
        for n in range(2, min(N, CUBATURE_MAX_DEGREE) + 1):
            if not zeros.max_zero_condition(data.alpha[n - 1]):
                continue
            rule = zeros.gaussian_cubature(w, n)
            built += 1
            if not np.all(rule.weights > 0):
                worst = np.inf
            errs = zeros.exactness_errors(rule, w)
            worst = max(worst, max(errs.values()), abs(rule.weights.sum() - w.mass))
        if built:
            self.record("cubature.exactness", worst, 1e-6)


def run_suite(w: WeightSpec, max_degree: int, seed: int = DEFAULT_SEED, tol: float | None = None) -> Suite:
    return Suite(w, max_degree, seed, tol).run()
