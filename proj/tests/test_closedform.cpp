#include <gtest/gtest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <random>

#include <kfw/closedform.hpp>

#include "oracles.hpp"

using namespace kfw;

namespace
{

PhysicalParams params(double mu_prime = 0.0)
{
	PhysicalParams p;
	p.m = 1.3;
	p.c = 2.0;
	p.q = -0.7;
	p.hbar = 0.9;
	p.mu_prime = mu_prime;
	return p;
}

Vec3 rand_vec(std::mt19937_64 &rng, double s)
{
	std::uniform_real_distribution<double> u(-s, s);
	return {u(rng), u(rng), u(rng)};
}

FieldPoint rand_point(std::mt19937_64 &rng, const PhysicalParams &p)
{
	FieldPoint x;
	const double mc = p.m * p.c;
	x.pi = rand_vec(rng, 2 * mc);
	x.E = rand_vec(rng, 1e-3 * mc * p.c);
	x.B = rand_vec(rng, 1e-3 * mc * p.c);
	x.phi = rand_vec(rng, 1).x();
	return x;
}

} // namespace

TEST(GammaPi, Values)
{
	PhysicalParams p = params();
	const double mc = p.m * p.c;
	EXPECT_DOUBLE_EQ(gamma_pi(p, Vec3::Zero()), 1.0);
	EXPECT_NEAR(gamma_pi(p, Vec3(mc, 0, 0)), std::sqrt(2.0), 1e-15);
	EXPECT_NEAR(gamma_pi(p, Vec3(0, mc / std::sqrt(2.0), 0)), std::sqrt(1.5), 1e-15);
	p.m = 0;
	EXPECT_THROW(gamma_pi(p, Vec3::Zero()), std::invalid_argument);
}

TEST(ClassicalH, FieldFreeIsKinetic)
{
	const PhysicalParams p = params(0.2);
	FieldPoint x;
	x.pi = Vec3(0.3, -1.0, 2.0);
	x.phi = 0.4;
	const Vec3 s(0, 0, p.hbar / 2);
	const double mc2 = p.m * p.c * p.c;
	EXPECT_NEAR(classical_H(p, x, s), std::sqrt(mc2 * mc2 + p.c * p.c * x.pi.squaredNorm()) + p.q * x.phi, 1e-13);
}

TEST(ClassicalH, RestFrameMoment)
{
	const PhysicalParams p = params(0.2);
	FieldPoint x;
	x.B = Vec3(0.01, -0.02, 0.03);
	const Vec3 s = p.hbar / 2 * Vec3(1, 2, 2) / 3.0;
	const double mc2 = p.m * p.c * p.c;
	EXPECT_NEAR(classical_H(p, x, s), mc2 - p.gamma_m() * s.dot(x.B), 1e-14);
}

TEST(ClassicalH, CheckedRejectsWrongSpinLength)
{
	const PhysicalParams p = params();
	EXPECT_THROW(classical_H_checked(p, FieldPoint{}, Vec3(p.hbar, 0, 0)), std::invalid_argument);
	EXPECT_NO_THROW(classical_H_checked(p, FieldPoint{}, Vec3(0, p.hbar / 2, 0)));
}

TEST(HFWClosed, FreeParticle)
{
	const PhysicalParams p = params();
	FieldPoint x;
	x.pi = Vec3(1, 2, -0.5);
	const double mc2 = p.m * p.c * p.c;
	const CMat2 H = HFW_closed(p, x);
	EXPECT_LT((H - std::sqrt(mc2 * mc2 + p.c * p.c * x.pi.squaredNorm()) * CMat2::Identity()).norm(), 1e-13);
}

TEST(HFWClosed, RestFrameZeeman)
{
	const PhysicalParams p = params();
	FieldPoint x;
	const double B = 0.02;
	x.B = Vec3(0, 0, B);
	const CMat2 H = HFW_closed(p, x);
	const double mc2 = p.m * p.c * p.c;
	const double split = p.q * p.hbar * B / (2 * p.m * p.c);
	EXPECT_NEAR(H(0, 0).real(), mc2 - split, 1e-14);
	EXPECT_NEAR(H(1, 1).real(), mc2 + split, 1e-14);
	EXPECT_NEAR(std::abs(H(0, 1)), 0.0, 1e-16);
}

TEST(HFWClosed, HermitianWithRealSpectrum)
{
	std::mt19937_64 rng(11);
	const PhysicalParams p = params();
	for (int i = 0; i < 200; ++i) {
		const CMat2 H = HFW_closed(p, rand_point(rng, p));
		EXPECT_LT((H - H.adjoint()).norm(), 1e-14 * H.norm());
	}
}

TEST(CalHFWClosed, DiracLimit)
{
	std::mt19937_64 rng(12);
	const PhysicalParams p = params(0.0);
	for (int i = 0; i < 200; ++i) {
		const FieldPoint x = rand_point(rng, p);
		const CMat2 a = calHFW_closed(p, x), b = HFW_closed(p, x);
		EXPECT_LT((a - b).norm(), 1e-14 * b.norm());
	}
}

TEST(CalHFWClosed, CollinearMagneticField)
{
	const PhysicalParams p = params(0.15);
	FieldPoint x;
	const Vec3 n = Vec3(1, -2, 2) / 3.0;
	x.pi = 1.7 * n;
	x.B = 0.01 * n;
	const double g = gamma_pi(p, x.pi);
	const double u2 = (x.pi / (p.m * p.c)).squaredNorm();
	const double k = p.q * p.hbar / (2 * p.m * p.c);
	const double V = x.B.norm() * (p.mu_prime + k / g - p.mu_prime * u2 / (g * (1 + g)));
	const double T = kinetic_energy(p, x.pi);
	const auto ev = oracle::eigenvalues(calHFW_closed(p, x));
	EXPECT_NEAR(ev[0], T - std::abs(V), 1e-13);
	EXPECT_NEAR(ev[1], T + std::abs(V), 1e-13);
}

TEST(CalHFWClosed, RotationalCovariance)
{
	std::mt19937_64 rng(13);
	const PhysicalParams p = params(0.3);
	std::normal_distribution<double> nd;
	for (int i = 0; i < 100; ++i) {
		const FieldPoint x = rand_point(rng, p);
		const Eigen::Quaterniond qr = Eigen::Quaterniond(nd(rng), nd(rng), nd(rng), nd(rng)).normalized();
		const Eigen::Matrix3d R = qr.toRotationMatrix();
		FieldPoint y = x;
		y.pi = R * x.pi;
		y.E = R * x.E;
		y.B = R * x.B;
		const auto a = oracle::eigenvalues(calHFW_closed(p, x));
		const auto b = oracle::eigenvalues(calHFW_closed(p, y));
		EXPECT_NEAR(a[0], b[0], 1e-13 * std::abs(a[0]));
		EXPECT_NEAR(a[1], b[1], 1e-13 * std::abs(a[1]));
	}
}

TEST(CalHFWClosed, ClassicalCorrespondence)
{
	std::mt19937_64 rng(14);
	const PhysicalParams p = params(-0.25);
	for (int i = 0; i < 300; ++i) {
		const FieldPoint x = rand_point(rng, p);
		Eigen::SelfAdjointEigenSolver<CMat2> es(calHFW_closed(p, x));
		for (int b = 0; b < 2; ++b) {
			const Vec3 n = spin_direction(es.eigenvectors().col(b));
			const double cl = classical_H_checked(p, x, p.hbar / 2 * n.normalized());
			EXPECT_NEAR(es.eigenvalues()[b], cl, 1e-9 * std::abs(cl)) << "sample " << i;
		}
	}
}

TEST(Conjecture, ReportOnly)
{
	PhysicalParams p = params(0.1);
	FieldPoint x;
	x.pi = Vec3(0.2, 0.1, 0);
	EXPECT_EQ(conjectured_inhomogeneous_form(p, x, 0.0).darwin_term, 0.0);
	EXPECT_EQ(conjectured_inhomogeneous_form(p, x, 1.0).label, "conjecture, not verified");
	EXPECT_NE(conjectured_inhomogeneous_form(p, x, 1.0).darwin_term, 0.0);
	// q/2mc = gamma'_m = 2 mu'/hbar
	p.mu_prime = p.q * p.hbar / (4 * p.m * p.c);
	EXPECT_NEAR(conjectured_inhomogeneous_form(p, x, 5.0).darwin_term, 0.0, 1e-15);
}
