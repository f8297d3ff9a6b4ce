#ifndef KFW_VERIFY_HPP
#define KFW_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "closedform.hpp"
#include "coeffs.hpp"
#include "golden.hpp"
#include "kutzelnigg.hpp"
#include "matrixlab.hpp"

// Named checks over the whole engine, shared by the command line and the
// acceptance suite.

namespace kfw
{

struct CheckResult {
	std::string name;
	bool pass = true;
	std::string detail;
};

enum class Theory { Dirac, DiracPauli };

inline CheckResult check_golden(Theory theory, int N, const std::filesystem::path &dir = default_golden_dir())
{
	CheckResult r;
	r.name = theory == Theory::Dirac ? "golden_X" : "golden_Xprime";
	const GoldenTable g = load_golden(dir / (theory == Theory::Dirac ? "dirac_X.json" : "pauli_Xprime.json"));
	const SeriesTable x = dirac_series(std::max(N, 3));
	const SeriesTable s = theory == Theory::Dirac ? x : pauli_series(std::max(N, 3), x);
	GoldenTable upto = g;
	std::erase_if(upto.orders, [N](const auto &kv) { return kv.first > N; });
	const auto bad = compare_golden(upto, s);
	r.pass = bad.empty();
	std::ostringstream os;
	os << upto.orders.size() << " orders compared";
	if (!bad.empty()) {
		os << "; first mismatch at order " << bad.front().order << ": expected " << render(bad.front().expected)
		   << ", got " << render(bad.front().actual);
	}
	r.detail = os.str();
	return r;
}

inline CheckResult check_theorem(Theorem which, int N)
{
	CheckResult r;
	r.name = which == Theorem::T1 ? "theorem_1" : "theorem_2";
	const SeriesTable x = dirac_series(std::max(N, 3));
	const SeriesTable s = which == Theorem::T1 ? x : pauli_series(std::max(N, 3), x);
	const int lo = which == Theorem::T1 ? 0 : 2;
	for (int n = lo; n <= N; ++n) {
		if (s.entry(n) != theorem_closed_form(which, n)) {
			r.pass = false;
			r.detail = "first mismatch at order " + std::to_string(n);
			return r;
		}
	}
	r.detail = "orders " + std::to_string(lo) + ".." + std::to_string(N) + " exact";
	return r;
}

struct IdentitySuite {
	CheckResult summary;
	std::vector<IdentityReport> reports;
};

inline IdentitySuite check_identities(const CoeffTable &table, std::size_t j_max)
{
	IdentitySuite s;
	s.summary.name = "identities";
	for (Identity id : {Identity::A, Identity::B, Identity::C, Identity::D, Identity::E, Identity::F}) {
		s.reports.push_back(verify_identity(table, id, j_max));
		const auto &rep = s.reports.back();
		if (!rep.pass() && s.summary.pass) {
			s.summary.pass = false;
			const auto *f = rep.first_failure();
			s.summary.detail = "first failure: identity " + std::string(to_string(id)) + " at j = " + std::to_string(f->j);
		}
	}
	if (s.summary.pass) {
		s.summary.detail = "A-F hold for j <= " + std::to_string(j_max);
	}
	return s;
}

/// Antihermitian parts of H_FW and calH_FW vanish at every order <= N, and
/// the (E.pi) family is absent.
inline CheckResult check_hermiticity(int N)
{
	CheckResult r;
	r.name = "hermiticity";
	const FWHamiltonian h = assemble_HFW(N);
	const FWHamiltonian ch = assemble_calHFW(N);
	const OperatorPoly ah = h.antihermitian();
	const OperatorPoly ach = ch.antihermitian();
	if (!ah.is_zero() || !ach.is_zero()) {
		r.pass = false;
		r.detail = "antihermitian remainder: " + render(ah.is_zero() ? ach : ah);
		return r;
	}
	if (!field_dot_family(h.poly, Field::E).is_zero() || !field_dot_family(ch.poly, Field::E).is_zero()) {
		r.pass = false;
		r.detail = "(E.pi) terms survive";
		return r;
	}
	r.detail = "orders <= " + std::to_string(N) + ": antihermitian parts are zero";
	return r;
}

/// The structural statements used along the way: both assembly routes, the
/// resummable form, the split into X and X', X^dag X purity and
/// [c (s.pi) X, X^dag X] = 0.
inline std::vector<CheckResult> check_lemmas(int N)
{
	std::vector<CheckResult> out;
	auto add = [&](std::string name, bool ok, std::string detail) { out.push_back({std::move(name), ok, std::move(detail)}); };

	const FWHamiltonian h = assemble_HFW(N);
	add("hfw_direct_equals_lemma", h.poly == assemble_HFW_direct(N).poly, "sqrt(1+X^dag X) conjugation vs commutator lemma");
	add("hfw_equals_resummable_form", h.poly == HFW_series_oracle(N).poly, "a_j, b_j series form");

	const FWHamiltonian ch = assemble_calHFW(N);
	add("calhfw_direct_equals_split", ch.poly == assemble_calHFW_direct(N).poly, "full calX conjugation vs H_FW + H'_FW");
	add("calhfw_equals_resummable_form", ch.poly == calHFW_series_oracle(N).poly, "a_j, b_j series form");
	add("lower_block_conjugation", lower_block(ch).poly == lower_block_direct(N).poly,
	    "charge conjugation vs Z^{-1}(H_- - H_0^dag calX^dag)Z");

	const SeriesTable x = dirac_series(N);
	const SeriesTable xp = pauli_series(N, x);
	const SeriesTable cx = calX_series(N);
	bool split = true;
	for (int n = 1; n <= N; ++n) {
		split = split && cx.entry(n) == x.entry(n) + xp.entry(n);
	}
	add("calX_equals_X_plus_Xprime", split, "orders <= " + std::to_string(N));

	bool even = true;
	for (int n = 2; n <= N; n += 2) {
		even = even && x.entry(n).is_zero();
	}
	add("even_orders_vanish", even, "X_2j = 0");

	const OperatorPoly X = resum(x, N, N);
	const OperatorPoly XdX = mul(dagger(X), X, N);
	const OperatorPoly hx = mul(OperatorPoly::term(1, {0, 1, 0, 0, 0}, {TailKind::SigmaPi, 0}), X, N);
	add("sigma_pi_X_commutes_with_XdagX", commutator(hx, XdX, N).is_zero(), "[c (s.pi) X, X^dag X] = 0");

	const bool pure = XdX.filtered([](const TermKey &k) {
		                     switch (k.mono.kind) {
			                     case TailKind::One: return false;
			                     case TailKind::SigmaField: return k.mono.field != Field::B;
			                     case TailKind::CrossSigma: return k.mono.field != Field::E;
			                     default: return true;
		                     }
	                     }).is_zero();
	add("XdagX_purity", pure, "only pi^{2k}, pi^{2k}(s.B), pi^{2k}((E x pi).s)");
	return out;
}

struct ResidualSummary {
	std::string name;
	int trials = 0;
	double max_offdiag_rel = 0;
	double max_block_rel = 0;
	double max_unitarity = 0;
	double tol_offdiag = 1e-10;
	double tol_block = 1e-10;
	double tol_unitarity = 1e-12;
	bool pass() const
	{
		return max_offdiag_rel <= tol_offdiag && max_block_rel <= tol_block && max_unitarity <= tol_unitarity;
	}
};

inline CMat2 random_hermitian(std::mt19937_64 &rng, double scale)
{
	std::uniform_real_distribution<double> u(-scale, scale);
	CMat2 M;
	const cplx off(u(rng), u(rng));
	M << u(rng), off, std::conj(off), u(rng);
	return M;
}

inline Vec3 random_vec(std::mt19937_64 &rng, double scale)
{
	std::uniform_real_distribution<double> u(-scale, scale);
	Vec3 v;
	v << u(rng), u(rng), u(rng);
	return v;
}

inline ResidualSummary run_case1(const PhysicalParams &p, int trials, std::uint64_t seed)
{
	ResidualSummary s;
	s.name = "case1";
	s.trials = trials;
	std::mt19937_64 rng(seed);
	for (int t = 0; t < trials; ++t) {
		const CMat2 M = random_hermitian(rng, 2.0 * p.m * p.c * p.c);
		const BlockResult r = solve_case1(p, M);
		const CMat2 expect = case1_upper(p, M);
		s.max_offdiag_rel = std::max(s.max_offdiag_rel, r.offdiag_norm / r.h_norm);
		s.max_block_rel = std::max(s.max_block_rel, (r.upper_block - expect).norm() / expect.norm());
		s.max_unitarity = std::max(s.max_unitarity, r.unitarity_residual / 2.0);
	}
	return s;
}

inline ResidualSummary run_case2(const PhysicalParams &p, int trials, std::uint64_t seed)
{
	ResidualSummary s;
	s.name = "case2";
	s.trials = trials;
	std::mt19937_64 rng(seed);
	int done = 0;
	while (done < trials) {
		const Vec3 mom = random_vec(rng, p.m * p.c);
		const Vec3 E = random_vec(rng, p.m * p.c * p.c / std::max(std::abs(p.mu_prime), 1e-300));
		BlockResult r;
		try {
			r = solve_case2(p, mom, E);
		} catch (const SingularOmega &) {
			continue;
		}
		++done;
		const CMat2 expect = case2_upper(p, mom, E);
		s.max_offdiag_rel = std::max(s.max_offdiag_rel, r.offdiag_norm / r.h_norm);
		s.max_block_rel = std::max(s.max_block_rel, (r.upper_block - expect).norm() / expect.norm());
		s.max_unitarity = std::max(s.max_unitarity, r.unitarity_residual / 2.0);
	}
	return s;
}

/// Massless case I with positive definite M: U = (1/sqrt 2)[[1, 1], [-1, 1]].
inline CheckResult check_massless(CMat4 *U_out = nullptr)
{
	CheckResult r;
	r.name = "massless";
	PhysicalParams p;
	p.m = 0;
	CMat2 M;
	M << 2.0, cplx(0.5, 0.25), cplx(0.5, -0.25), 1.0;
	const BlockResult b = solve_case1(p, M);
	CMat4 expect = CMat4::Zero();
	const double h = 1 / std::sqrt(2.0);
	expect.topLeftCorner<2, 2>() = h * CMat2::Identity();
	expect.topRightCorner<2, 2>() = h * CMat2::Identity();
	expect.bottomLeftCorner<2, 2>() = -h * CMat2::Identity();
	expect.bottomRightCorner<2, 2>() = h * CMat2::Identity();
	const double err = (b.U - expect).norm();
	r.pass = err <= 1e-14 && b.offdiag_norm <= 1e-12 * b.h_norm;
	std::ostringstream os;
	os << "|U - U_weyl|_F = " << err;
	r.detail = os.str();
	if (U_out) {
		*U_out = b.U;
	}
	return r;
}

struct ConjugationSummary {
	double max_series = 0; ///< series lower block vs -T(upper(-pi, -q, -mu'))
	double max_closed = 0; ///< series lower block vs -T(calHFW_closed(-pi, -q, -mu'))
	double max_exact = 0;  ///< exact case I / II lower blocks vs -T(upper)
	double tol = 1e-10;
	bool symbolic = false;
	bool pass() const { return symbolic && max_series <= tol && max_closed <= tol && max_exact <= tol; }
};

inline PhysicalParams conjugated(PhysicalParams p)
{
	p.q = -p.q;
	p.mu_prime = -p.mu_prime;
	return p;
}

inline ConjugationSummary run_conjugation(const PhysicalParams &p, int N, int trials, std::uint64_t seed)
{
	ConjugationSummary s;
	const FWHamiltonian upper = assemble_calHFW(N);
	const FWHamiltonian lower = lower_block(upper);
	s.symbolic = lower.poly == lower_block_direct(N).poly && lower_block(lower).poly == upper.poly;
	const PhysicalParams pc = conjugated(p);
	std::mt19937_64 rng(seed);
	const double mc = p.m * p.c;
	for (int t = 0; t < trials; ++t) {
		FieldPoint x;
		x.pi = random_vec(rng, 0.4 * mc / std::sqrt(3.0));
		x.E = random_vec(rng, 1e-2);
		x.B = random_vec(rng, 1e-2);
		x.phi = random_vec(rng, 1.0).x();
		FieldPoint xc = x;
		xc.pi = -x.pi;
		const CMat2 L = evaluate(lower.poly, p, x, lower.phi_sign);
		const CMat2 Uc = evaluate(upper.poly, pc, xc, upper.phi_sign);
		const double scale = L.norm();
		s.max_series = std::max(s.max_series, (L + spin_flip(Uc)).norm() / scale);
		s.max_closed = std::max(s.max_closed, (L + spin_flip(calHFW_closed(pc, xc))).norm() / scale);

		const Vec3 mom = random_vec(rng, mc);
		const BlockResult c1 = solve_case1(p, p.c * sigma_dot(mom));
		const BlockResult c1m = solve_case1(pc, p.c * sigma_dot(-mom));
		s.max_exact = std::max(s.max_exact, (c1.lower_block + spin_flip(c1m.upper_block)).norm() / c1.lower_block.norm());
		const Vec3 E = random_vec(rng, mc);
		try {
			const BlockResult c2 = solve_case2(p, mom, E);
			const BlockResult c2m = solve_case2(pc, -mom, E);
			s.max_exact =
			    std::max(s.max_exact, (c2.lower_block + spin_flip(c2m.upper_block)).norm() / c2.lower_block.norm());
		} catch (const SingularOmega &) {
		}
	}
	return s;
}

struct ResummationPoint {
	double pi_over_mc;
	int order;
	double rel_err;
	double closed_norm;
};

/// Relative error of the order-N partial sums of H_FW and calH_FW against the
/// closed forms along a fixed direction.
inline std::vector<ResummationPoint> resummation_errors(const PhysicalParams &p, const std::vector<double> &ratios,
                                                        const std::vector<int> &orders, bool dirac)
{
	int top = 3;
	for (int o : orders) {
		top = std::max(top, o);
	}
	const FWHamiltonian series = dirac ? assemble_HFW(top) : assemble_calHFW(top);
	PhysicalParams pp = p;
	if (dirac) {
		pp.mu_prime = 0;
	}
	std::vector<ResummationPoint> out;
	const Vec3 dir = Vec3(0.6, 0.0, 0.8);
	for (double r : ratios) {
		FieldPoint x;
		x.pi = r * p.m * p.c * dir;
		x.E = Vec3(0.01, -0.02, 0.015);
		x.B = Vec3(-0.01, 0.02, 0.005);
		x.phi = 0.1;
		const CMat2 closed = dirac ? HFW_closed(pp, x) : calHFW_closed(pp, x);
		for (int o : orders) {
			const CMat2 part = evaluate(series.poly.truncated(o), pp, x, series.phi_sign);
			out.push_back({r, o, (part - closed).norm() / closed.norm(), closed.norm()});
		}
	}
	return out;
}

struct ClassicalSummary {
	int samples = 0;
	double max_rel = 0;
	double tol = 1e-9;
	bool pass() const { return max_rel <= tol; }
};

inline ClassicalSummary run_classical(const PhysicalParams &p, int samples, std::uint64_t seed)
{
	ClassicalSummary s;
	s.samples = samples;
	std::mt19937_64 rng(seed);
	const double mc = p.m * p.c;
	for (int i = 0; i < samples; ++i) {
		FieldPoint x;
		x.pi = random_vec(rng, 1.5 * mc);
		x.E = random_vec(rng, 1e-3 * mc * p.c);
		x.B = random_vec(rng, 1e-3 * mc * p.c);
		x.phi = random_vec(rng, 1.0).x();
		const auto cc = classical_compare(p, x);
		const double scale = std::max(std::abs(cc.eigen_plus), std::abs(cc.eigen_minus));
		s.max_rel = std::max(s.max_rel, cc.abs_diff / scale);
	}
	return s;
}

struct GaussianSummary {
	int samples = 0;
	double max_err = 0;
	double tol = 1e-8;
	bool pass() const { return max_err <= tol; }
};

/// gaussian_invsqrt against the spectral (1+A)^{-1/2}, including spectra
/// with norm 3.
inline GaussianSummary run_gaussian(int samples, std::uint64_t seed)
{
	GaussianSummary s;
	std::mt19937_64 rng(seed);
	std::vector<CMat2> cases{CMat2::Zero(), 3.0 * CMat2::Identity()};
	CMat2 D;
	D << 3.0, 0, 0, 0.5;
	cases.push_back(D);
	for (int i = 0; i < samples; ++i) {
		const CMat2 R = random_hermitian(rng, 1.0);
		CMat2 A = R * R.adjoint();
		const double n = Eigen::SelfAdjointEigenSolver<CMat2>(A).eigenvalues().cwiseAbs().maxCoeff();
		A *= 3.0 / n; // spectral norm 3
		cases.push_back(A);
	}
	for (const auto &A : cases) {
		const CMat2 ref = hermitian_function<2>(CMat2(CMat2::Identity() + A), [](double l) { return 1 / std::sqrt(l); });
		s.max_err = std::max(s.max_err, (gaussian_invsqrt(A) - ref).norm());
	}
	s.samples = static_cast<int>(cases.size());
	return s;
}

} // namespace kfw

#endif
