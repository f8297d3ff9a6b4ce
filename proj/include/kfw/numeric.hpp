#ifndef KFW_NUMERIC_HPP
#define KFW_NUMERIC_HPP

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "algebra.hpp"

namespace kfw
{

using Vec3 = Eigen::Vector3d;
using CMat2 = Eigen::Matrix2cd;
using CMat4 = Eigen::Matrix4cd;
using cplx = std::complex<double>;

struct PhysicalParams {
	double m = 1.0;
	double c = 1.0;
	double q = 1.0;
	double hbar = 1.0;
	double mu_prime = 0.0;

	double gamma_m_prime() const { return 2.0 * mu_prime / hbar; }
	double gamma_m() const { return gamma_m_prime() + q / (m * c); }
	double mu_second() const { return c * mu_prime; }

	void validate() const
	{
		if (!(m >= 0.0) || !(c > 0.0) || !(hbar > 0.0) || !std::isfinite(q) || !std::isfinite(mu_prime)) {
			throw std::invalid_argument("PhysicalParams: need m >= 0, c > 0, hbar > 0 and finite q, mu'");
		}
	}
};

struct FieldPoint {
	Vec3 pi = Vec3::Zero();
	Vec3 E = Vec3::Zero();
	Vec3 B = Vec3::Zero();
	double phi = 0.0;
};

/// Pauli matrices, sigma_z diagonal.
inline const std::array<CMat2, 3> &pauli()
{
	static const std::array<CMat2, 3> s = [] {
		std::array<CMat2, 3> a;
		a[0] << 0, 1, 1, 0;
		a[1] << 0, cplx(0, -1), cplx(0, 1), 0;
		a[2] << 1, 0, 0, -1;
		return a;
	}();
	return s;
}

inline CMat2 sigma_dot(const Vec3 &v)
{
	const auto &s = pauli();
	return v.x() * s[0] + v.y() * s[1] + v.z() * s[2];
}

/// Unit-grade monomial m^a c^b hbar^h q^r mu''^s at numeric parameters.
inline double grade_value(const UnitGrade &g, const PhysicalParams &p)
{
	return std::pow(p.m, g.m) * std::pow(p.c, g.c) * std::pow(p.hbar, g.hbar) * std::pow(p.q, g.q) *
	       std::pow(p.mu_second(), g.mu);
}

inline CMat2 tail_matrix(const MonomialTail &t, const FieldPoint &x)
{
	const Vec3 &F = (t.field == Field::E) ? x.E : x.B;
	const double pk = std::pow(x.pi.squaredNorm(), t.k);
	switch (t.kind) {
		case TailKind::One: return pk * CMat2::Identity();
		case TailKind::SigmaPi: return pk * sigma_dot(x.pi);
		case TailKind::FieldDot: return pk * F.dot(x.pi) * CMat2::Identity();
		case TailKind::SigmaField: return pk * sigma_dot(F);
		case TailKind::SigmaPiFieldDot: return pk * F.dot(x.pi) * sigma_dot(x.pi);
		case TailKind::CrossSigma: return pk * sigma_dot(F.cross(x.pi));
	}
	throw std::logic_error("tail_matrix");
}

/// Symbol-model value of a polynomial: pi, E, B become commuting numeric
/// vectors and sigma the Pauli matrices. `phi_sign` adds phi_sign * q * phi.
inline CMat2 evaluate(const OperatorPoly &p, const PhysicalParams &par, const FieldPoint &x, int phi_sign = 0)
{
	CMat2 out = CMat2::Zero();
	for (const auto &[k, c] : p.terms()) {
		const cplx coeff(c.re().get_d(), c.im().get_d());
		out += coeff * grade_value(k.grade, par) * tail_matrix(k.mono, x);
	}
	out += static_cast<double>(phi_sign) * par.q * x.phi * CMat2::Identity();
	return out;
}

/// sigma_y conj(A) sigma_y: the matrix image of sigma -> -sigma, i -> -i.
inline CMat2 spin_flip(const CMat2 &A)
{
	const CMat2 &sy = pauli()[1];
	return sy * A.conjugate() * sy;
}

/// Expectation of sigma in a normalized 2-spinor.
inline Vec3 spin_direction(const Eigen::Vector2cd &v)
{
	const auto &s = pauli();
	Vec3 n;
	for (int i = 0; i < 3; ++i) {
		n[i] = (v.adjoint() * s[i] * v)(0, 0).real();
	}
	return n;
}

} // namespace kfw

#endif
