#ifndef KFW_TEST_ORACLES_HPP
#define KFW_TEST_ORACLES_HPP

// Test-side reference implementations, written independently of the
// library code paths they check.

#include <gmpxx.h>

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include <kfw/algebra.hpp>

namespace oracle
{

using kfw::BigRational;

inline mpz_class binomial(unsigned long n, unsigned long k)
{
	mpz_class r;
	mpz_bin_uiui(r.get_mpz_t(), n, k);
	return r;
}

inline BigRational catalan(long j)
{
	BigRational r(binomial(2 * j, j), j + 1);
	r.canonicalize();
	return r;
}

inline BigRational b(long j) { return j == 0 ? BigRational(0) : BigRational(2 * j - 1) * catalan(j - 1); }

inline BigRational c(long j)
{
	BigRational s = 0;
	for (long j1 = 0; j1 <= j; ++j1) {
		s += b(j1) * b(j - j1);
	}
	return 2 * s;
}

inline BigRational d(long j)
{
	BigRational s = 0;
	for (long j1 = 0; j1 <= j - 2; ++j1) {
		for (long j2 = 0; j1 + j2 <= j - 2; ++j2) {
			s += BigRational(2 * (j1 + 1)) * catalan(j1) * catalan(j2) * catalan(j - 2 - j1 - j2);
		}
	}
	return s;
}

/// binom(1/2, n) as a falling product.
inline BigRational e(long n)
{
	BigRational r = 1;
	for (long i = 0; i < n; ++i) {
		r *= BigRational(1, 2) - i;
		r /= i + 1;
	}
	return r;
}

inline BigRational pow2(int e)
{
	BigRational r = 1;
	for (int i = 0; i < e; ++i) {
		r *= 2;
	}
	return r;
}

inline BigRational sgn(long j) { return j % 2 == 0 ? BigRational(1) : BigRational(-1); }

/// (s.pi)^n by repeated multiplication.
inline kfw::OperatorPoly sigma_pi_pow(int n)
{
	kfw::OperatorPoly out = kfw::OperatorPoly::one();
	for (int i = 0; i < n; ++i) {
		out = kfw::mul(out, kfw::OperatorPoly::sigma_pi());
	}
	return out;
}

/// X_n from the generic Dirac closed form with oracle coefficients.
inline kfw::OperatorPoly theorem1(int n)
{
	using namespace kfw;
	OperatorPoly out;
	if (n % 2 == 0) {
		return out;
	}
	const long j = (n - 1) / 2;
	const UnitGrade m_pow{-static_cast<int>(2 * j + 1), 0, 0, 0, 0};
	out += sigma_pi_pow(n).scaled(GaussianRational(sgn(j) * catalan(j) / pow2(2 * j + 1)), m_pow);
	const UnitGrade field{-static_cast<int>(2 * j), 0, 1, 1, 0};
	if (j >= 1) {
		out.add(GaussianRational(0, sgn(j) * b(j) / pow2(2 * j)), field,
		        {TailKind::SigmaField, static_cast<int>(j - 1), Field::E});
	}
	if (j >= 2) {
		out.add(GaussianRational(0, sgn(j) * c(j) / pow2(2 * j)), field,
		        {TailKind::SigmaPiFieldDot, static_cast<int>(j - 2), Field::E});
	}
	return out;
}

/// X'_n from the generic Dirac-Pauli closed form with oracle coefficients.
inline kfw::OperatorPoly theorem2(int n)
{
	using namespace kfw;
	OperatorPoly out;
	const long j = n / 2;
	if (n % 2 == 0) {
		if (j >= 2) {
			out.add(GaussianRational(sgn(j) * 2 * b(j - 1) / pow2(2 * j - 2)),
			        {-static_cast<int>(2 * j - 2), 0, 0, 0, 1}, {TailKind::FieldDot, static_cast<int>(j - 2), Field::B});
		}
		return out;
	}
	const UnitGrade g{-static_cast<int>(2 * j - 1), 0, 0, 0, 1};
	out.add(GaussianRational(0, sgn(j) * b(j) / pow2(2 * j - 1)), g,
	        {TailKind::SigmaField, static_cast<int>(j - 1), Field::E});
	if (j >= 2) {
		out.add(GaussianRational(0, -sgn(j) * d(j) / pow2(2 * j - 1)), g,
		        {TailKind::SigmaPiFieldDot, static_cast<int>(j - 2), Field::E});
	}
	return out;
}

using CMat4 = Eigen::Matrix4cd;
using CMat2 = Eigen::Matrix2cd;

/// Sorted eigenvalues of a Hermitian matrix.
template <typename M>
std::vector<double> eigenvalues(const M &A)
{
	Eigen::SelfAdjointEigenSolver<M> es(A);
	std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
	std::sort(v.begin(), v.end());
	return v;
}

/// (1+A)^{-1/2} by the spectral theorem.
inline CMat2 spectral_invsqrt(const CMat2 &A)
{
	Eigen::SelfAdjointEigenSolver<CMat2> es(CMat2(CMat2::Identity() + A));
	Eigen::Vector2d d = es.eigenvalues().cwiseSqrt().cwiseInverse();
	return es.eigenvectors() * d.cast<std::complex<double>>().asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace oracle

#endif
