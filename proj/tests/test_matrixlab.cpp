#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <kfw/matrixlab.hpp>

#include "oracles.hpp"

using namespace kfw;

namespace
{

std::mt19937_64 &rng()
{
	static std::mt19937_64 r(2024);
	return r;
}

CMat2 rand_herm(double s)
{
	std::uniform_real_distribution<double> u(-s, s);
	CMat2 A;
	A(0, 0) = u(rng());
	A(1, 1) = u(rng());
	A(0, 1) = cplx(u(rng()), u(rng()));
	A(1, 0) = std::conj(A(0, 1));
	return A;
}

Vec3 rand_vec(double s)
{
	std::uniform_real_distribution<double> u(-s, s);
	return {u(rng()), u(rng()), u(rng())};
}

PhysicalParams params()
{
	PhysicalParams p;
	p.m = 0.8;
	p.c = 1.5;
	p.q = 0.6;
	p.hbar = 1.1;
	p.mu_prime = 0.35;
	return p;
}

// union of block spectra against the 4x4 spectrum
void expect_spectrum_preserved(const BlockResult &r)
{
	auto full = oracle::eigenvalues(r.H);
	auto up = oracle::eigenvalues(r.upper_block);
	auto low = oracle::eigenvalues(r.lower_block);
	std::vector<double> blocks{up[0], up[1], low[0], low[1]};
	std::sort(blocks.begin(), blocks.end());
	for (int i = 0; i < 4; ++i) {
		EXPECT_NEAR(blocks[i], full[i], 1e-10 * std::max(1.0, r.h_norm));
	}
	// the upper block carries the positive branch when there is a gap
	if (full[2] - full[1] > 1e-6 * r.h_norm) {
		EXPECT_GT(up[0], 0.0);
		EXPECT_LT(low[1], 0.0);
	}
}

} // namespace

TEST(DiracPauliMatrix, Structure)
{
	const PhysicalParams p = params();
	FieldPoint x;
	x.E = Vec3(0.1, 0, 0);
	x.B = Vec3(0, 0, 0.2);
	x.phi = 0.5;
	const CMat2 M = rand_herm(1.0);
	const CMat4 H = build_dirac_pauli_matrix(p, x, M);
	EXPECT_TRUE(is_hermitian<4>(H));
	const double mc2 = p.m * p.c * p.c;
	EXPECT_NEAR(H(0, 0).real(), mc2 + p.q * x.phi - p.mu_prime * 0.2, 1e-15);
	EXPECT_NEAR(H(3, 3).real(), -mc2 + p.q * x.phi - p.mu_prime * 0.2, 1e-15);
	EXPECT_LT((H.topRightCorner<2, 2>() - M - cplx(0, p.mu_prime) * sigma_dot(x.E)).norm(), 1e-15);
}

TEST(DiracPauliMatrix, RejectsNonHermitianM)
{
	CMat2 M = CMat2::Zero();
	M(0, 1) = 1.0;
	EXPECT_THROW(build_dirac_pauli_matrix(params(), FieldPoint{}, M), std::invalid_argument);
	EXPECT_THROW(solve_case1(params(), M), std::invalid_argument);
}

TEST(Case1, RandomHermitianM)
{
	const PhysicalParams p = params();
	for (int t = 0; t < 100; ++t) {
		const CMat2 M = rand_herm(3.0);
		const BlockResult r = solve_case1(p, M);
		EXPECT_LE(r.offdiag_norm, 1e-10 * r.h_norm) << t;
		const CMat2 up = case1_upper(p, M);
		EXPECT_LE((r.upper_block - up).norm(), 1e-10 * up.norm()) << t;
		EXPECT_LE((r.lower_block + up).norm(), 1e-10 * up.norm()) << t;
		EXPECT_LE(r.unitarity_residual, 1e-12) << t;
		expect_spectrum_preserved(r);
	}
}

TEST(Case1, FreeParticle)
{
	const PhysicalParams p = params();
	const Vec3 mom(0.3, -0.4, 1.2);
	const BlockResult r = solve_case1(p, p.c * sigma_dot(mom));
	const double mc2 = p.m * p.c * p.c;
	const double Ep = std::sqrt(mc2 * mc2 + p.c * p.c * mom.squaredNorm());
	EXPECT_LT((r.upper_block - Ep * CMat2::Identity()).norm(), 1e-12);
}

TEST(Case1, MasslessPositiveDefinite)
{
	PhysicalParams p;
	p.m = 0;
	CMat2 M;
	M << 3.0, cplx(1, 1), cplx(1, -1), 2.0;
	const BlockResult r = solve_case1(p, M);
	const double h = 1 / std::sqrt(2.0);
	CMat4 expect;
	expect << h, 0, h, 0, 0, h, 0, h, -h, 0, h, 0, 0, -h, 0, h;
	EXPECT_LT((r.U - expect).norm(), 1e-14);
	EXPECT_LE(r.offdiag_norm, 1e-12 * r.h_norm);
}

TEST(Case1, MasslessIndefiniteUsesSign)
{
	PhysicalParams p;
	p.m = 0;
	for (int t = 0; t < 50; ++t) {
		const CMat2 M = rand_herm(2.0);
		const BlockResult r = solve_case1(p, M);
		const CMat2 S = hermitian_function<2>(M, [](double l) { return l > 0 ? 1.0 : -1.0; });
		const double h = 1 / std::sqrt(2.0);
		CMat4 expect;
		expect.topLeftCorner<2, 2>() = h * CMat2::Identity();
		expect.topRightCorner<2, 2>() = h * S;
		expect.bottomLeftCorner<2, 2>() = -h * S;
		expect.bottomRightCorner<2, 2>() = h * CMat2::Identity();
		EXPECT_LT((r.U - expect).norm(), 1e-10) << t;
		EXPECT_LE(r.offdiag_norm, 1e-10 * r.h_norm) << t;
	}
}

TEST(Case1, MasslessSingularRejected)
{
	PhysicalParams p;
	p.m = 0;
	CMat2 M;
	M << 1.0, 1.0, 1.0, 1.0;
	EXPECT_THROW(solve_case1(p, M), std::invalid_argument);
}

TEST(Case2, RandomAgainstClosedForm)
{
	const PhysicalParams p = params();
	int done = 0;
	for (int t = 0; t < 100; ++t) {
		const Vec3 mom = rand_vec(p.m * p.c);
		const Vec3 E = rand_vec(p.m * p.c * p.c / p.mu_prime);
		BlockResult r;
		try {
			r = solve_case2(p, mom, E);
		} catch (const SingularOmega &) {
			continue;
		}
		++done;
		const CMat2 up = case2_upper(p, mom, E);
		EXPECT_LE(r.offdiag_norm, 1e-10 * r.h_norm) << t;
		EXPECT_LE((r.upper_block - up).norm(), 1e-10 * up.norm()) << t;
		EXPECT_LE(r.unitarity_residual, 1e-12) << t;
		expect_spectrum_preserved(r);
	}
	EXPECT_GE(done, 95);
}

TEST(Case2, ZeroFieldReducesToCase1)
{
	const PhysicalParams p = params();
	const Vec3 mom(0.2, 0.7, -0.1);
	const BlockResult a = solve_case2(p, mom, Vec3::Zero());
	const BlockResult b = solve_case1(p, p.c * sigma_dot(mom));
	EXPECT_LT((a.upper_block - b.upper_block).norm(), 1e-12);
	EXPECT_LT((a.U - b.U).norm(), 1e-12);
}

TEST(Case2, RestFrameIsDegenerateButFine)
{
	const PhysicalParams p = params();
	const Vec3 E(0.3, 0.1, -0.2);
	const BlockResult r = solve_case2(p, Vec3::Zero(), E);
	const double mc2 = p.m * p.c * p.c;
	const double e = std::sqrt(mc2 * mc2 + p.mu_prime * p.mu_prime * E.squaredNorm());
	EXPECT_LT((r.upper_block - e * CMat2::Identity()).norm(), 1e-12);
}

TEST(Case2, SingularOmegaThrows)
{
	const PhysicalParams p = params();
	const Vec3 E(0, 1, 0);
	const Vec3 mom(std::abs(p.mu_prime) / p.c, 0, 0);
	EXPECT_THROW(solve_case2(p, mom, E), SingularOmega);
	try {
		solve_case2(p, mom, E);
	} catch (const SingularOmega &e) {
		EXPECT_NE(std::string(e.what()).find("singular"), std::string::npos);
	}
}

TEST(Case2, RequiresMass)
{
	PhysicalParams p = params();
	p.m = 0;
	EXPECT_THROW(solve_case2(p, Vec3(1, 0, 0), Vec3::Zero()), std::invalid_argument);
}

TEST(Functions, SquareRootSquares)
{
	for (int t = 0; t < 50; ++t) {
		const CMat2 A = rand_herm(2.0);
		const CMat2 S = A * A + 0.1 * CMat2::Identity();
		const CMat2 r = hermitian_function<2>(S, [](double l) { return std::sqrt(l); });
		EXPECT_LT((r * r - S).norm(), 1e-12 * S.norm());
	}
}

TEST(GaussianInvSqrt, Basics)
{
	EXPECT_LT((gaussian_invsqrt(CMat2::Zero()) - CMat2::Identity()).norm(), 1e-12);
	EXPECT_LT((gaussian_invsqrt(3.0 * CMat2::Identity()) - 0.5 * CMat2::Identity()).norm(), 1e-12);
}

TEST(GaussianInvSqrt, RandomAgainstSpectral)
{
	for (int t = 0; t < 200; ++t) {
		CMat2 A = rand_herm(3.0);
		const double lo = oracle::eigenvalues(A)[0];
		if (lo <= -0.9) {
			A += (-0.9 - lo) * CMat2::Identity();
		}
		EXPECT_LT((gaussian_invsqrt(A) - oracle::spectral_invsqrt(A)).norm(), 1e-8) << t;
	}
}

TEST(GaussianInvSqrt, RejectsBadInput)
{
	EXPECT_THROW(gaussian_invsqrt(-2.0 * CMat2::Identity()), std::invalid_argument);
	CMat2 A = CMat2::Zero();
	A(0, 1) = 1.0;
	EXPECT_THROW(gaussian_invsqrt(A), std::invalid_argument);
	EXPECT_THROW(gaussian_invsqrt(CMat2::Zero(), 2), std::invalid_argument);
}

TEST(Sweep, EmptyGridRejected)
{
	SweepSpec s;
	EXPECT_THROW(series_vs_closed_sweep(params(), s), std::invalid_argument);
}

TEST(Sweep, ConvergesInsideRadiusAndDivergesOutside)
{
	SweepSpec s;
	s.pi_over_mc = {0.3, 0.6, 1.2};
	s.orders = {10, 20, 30};
	const SweepTable t = series_vs_closed_sweep(params(), s);
	ASSERT_EQ(t.rows.size(), 3u);
	EXPECT_EQ(t.columns.front(), "pi_over_mc");
	EXPECT_EQ(t.columns.back(), "series_rel_err_order_30");
	EXPECT_LT(t.column(1, "series_rel_err_order_30"), 1e-6);
	EXPECT_LT(t.column(1, "series_rel_err_order_30"), t.column(1, "series_rel_err_order_10"));
	EXPECT_GT(t.column(2, "series_rel_err_order_30"), t.column(2, "series_rel_err_order_20"));
	EXPECT_GT(t.column(2, "series_rel_err_order_20"), t.column(2, "series_rel_err_order_10"));
	EXPECT_TRUE(std::isfinite(t.column(2, "closed_norm")));
	EXPECT_EQ(t.column(2, "within_radius"), 0.0);
	EXPECT_NEAR(t.column(1, "v_over_c"), 0.6 / std::sqrt(1.36), 1e-15);
	for (std::size_t r = 0; r < 3; ++r) {
		EXPECT_LT(t.column(r, "abs_diff"), 1e-9);
	}
	const std::string csv = t.to_csv();
	EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}
