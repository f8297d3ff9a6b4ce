#ifndef KFW_MATRIXLAB_HPP
#define KFW_MATRIXLAB_HPP

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "closedform.hpp"
#include "kutzelnigg.hpp"
#include "numeric.hpp"

// Exact numeric block diagonalizations on small matrices.

namespace kfw
{

struct SingularOmega : std::domain_error {
	using std::domain_error::domain_error;
};

/// f applied to the spectrum of a Hermitian matrix.
template <int N, typename F>
Eigen::Matrix<cplx, N, N> hermitian_function(const Eigen::Matrix<cplx, N, N> &A, F f)
{
	Eigen::SelfAdjointEigenSolver<Eigen::Matrix<cplx, N, N>> es(A);
	if (es.info() != Eigen::Success) {
		throw std::runtime_error("hermitian_function: eigendecomposition failed");
	}
	Eigen::Matrix<double, N, 1> d = es.eigenvalues();
	for (int i = 0; i < N; ++i) {
		d[i] = f(d[i]);
	}
	return es.eigenvectors() * d.template cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

template <int N>
bool is_hermitian(const Eigen::Matrix<cplx, N, N> &A, double rtol = 1e-12)
{
	return (A - A.adjoint()).norm() <= rtol * std::max(1.0, A.norm());
}

struct BlockResult {
	CMat4 H;
	CMat4 U;
	CMat4 transformed; ///< U H U^dag
	CMat2 X;
	CMat2 upper_block;
	CMat2 lower_block;
	double offdiag_norm = 0;
	double unitarity_residual = 0;
	double h_norm = 0;
};

/// The 4x4 Dirac-Pauli matrix with c(s.pi) realized by the Hermitian 2x2 `M`.
inline CMat4 build_dirac_pauli_matrix(const PhysicalParams &p, const FieldPoint &x, const CMat2 &M)
{
	p.validate();
	if (!is_hermitian<2>(M)) {
		throw std::invalid_argument("build_dirac_pauli_matrix: M must be Hermitian");
	}
	const double mc2 = p.m * p.c * p.c;
	const CMat2 I = CMat2::Identity();
	const CMat2 sB = sigma_dot(x.B);
	const CMat2 sE = sigma_dot(x.E);
	CMat4 H;
	H.topLeftCorner<2, 2>() = (mc2 + p.q * x.phi) * I - p.mu_prime * sB;
	H.topRightCorner<2, 2>() = M + cplx(0, p.mu_prime) * sE;
	H.bottomLeftCorner<2, 2>() = M - cplx(0, p.mu_prime) * sE;
	H.bottomRightCorner<2, 2>() = (-mc2 + p.q * x.phi) * I + p.mu_prime * sB;
	return H;
}

/// U = [[Y, Y X^dag], [-Z X, Z]] with Y = (1+X^dag X)^{-1/2}, Z = (1+X X^dag)^{-1/2}.
inline CMat4 kutzelnigg_unitary(const CMat2 &X)
{
	const CMat2 I = CMat2::Identity();
	auto inv_sqrt = [](double v) { return 1.0 / std::sqrt(v); };
	const CMat2 Y = hermitian_function<2>(I + X.adjoint() * X, inv_sqrt);
	const CMat2 Z = hermitian_function<2>(I + X * X.adjoint(), inv_sqrt);
	CMat4 U;
	U.topLeftCorner<2, 2>() = Y;
	U.topRightCorner<2, 2>() = Y * X.adjoint();
	U.bottomLeftCorner<2, 2>() = -Z * X;
	U.bottomRightCorner<2, 2>() = Z;
	return U;
}

inline BlockResult block_diagonalize(const CMat4 &H, const CMat2 &X)
{
	BlockResult r;
	r.H = H;
	r.X = X;
	r.U = kutzelnigg_unitary(X);
	r.transformed = r.U * H * r.U.adjoint();
	r.upper_block = r.transformed.topLeftCorner<2, 2>();
	r.lower_block = r.transformed.bottomRightCorner<2, 2>();
	r.offdiag_norm = std::sqrt(r.transformed.topRightCorner<2, 2>().squaredNorm() +
	                           r.transformed.bottomLeftCorner<2, 2>().squaredNorm());
	r.unitarity_residual = (r.U * r.U.adjoint() - CMat4::Identity()).norm();
	r.h_norm = H.norm();
	return r;
}

/// Magnetostatic Dirac case: H = [[mc^2, M], [M, -mc^2]],
/// X = M (mc^2 + sqrt(m^2c^4 + M^2))^{-1}. At m = 0, X = sign(M).
inline BlockResult solve_case1(const PhysicalParams &p, const CMat2 &M)
{
	p.validate();
	if (!is_hermitian<2>(M)) {
		throw std::invalid_argument("solve_case1: M must be Hermitian");
	}
	const double mc2 = p.m * p.c * p.c;
	if (mc2 == 0.0) {
		Eigen::SelfAdjointEigenSolver<CMat2> es(M);
		if (es.eigenvalues().cwiseAbs().minCoeff() <= 1e-12 * std::max(M.norm(), 1e-300)) {
			throw std::invalid_argument("solve_case1: massless case needs invertible M");
		}
	}
	const CMat2 X = hermitian_function<2>(M, [mc2](double l) { return l / (mc2 + std::sqrt(mc2 * mc2 + l * l)); });
	PhysicalParams q = p;
	q.mu_prime = 0;
	q.q = 0;
	return block_diagonalize(build_dirac_pauli_matrix(q, FieldPoint{}, M), X);
}

/// sqrt(m^2c^4 + M^2), the expected upper block of case I.
inline CMat2 case1_upper(const PhysicalParams &p, const CMat2 &M)
{
	const double mc2 = p.m * p.c * p.c;
	return hermitian_function<2>(M, [mc2](double l) { return std::sqrt(mc2 * mc2 + l * l); });
}

/// Omega = c(s.p) + i mu'(s.E)
inline CMat2 case2_omega(const PhysicalParams &p, const Vec3 &mom, const Vec3 &E)
{
	return p.c * sigma_dot(mom) + cplx(0, p.mu_prime) * sigma_dot(E);
}

/// Uncharged Dirac-Pauli particle in a static homogeneous E field:
/// Omega X = -mc^2 + sqrt(m^2c^4 + Omega Omega^dag), then X = Omega^{-1}(Omega X).
inline BlockResult solve_case2(const PhysicalParams &p, const Vec3 &mom, const Vec3 &E)
{
	detail::require_mass(p, "solve_case2");
	const double mc2 = p.m * p.c * p.c;
	const CMat2 Om = case2_omega(p, mom, E);
	const CMat2 OmOmd = Om * Om.adjoint();
	const CMat2 OmX = hermitian_function<2>(OmOmd, [mc2](double l) { return -mc2 + std::sqrt(mc2 * mc2 + l); });
	const cplx det = Om.determinant();
	const double scale = std::pow(p.c * mom.norm() + std::abs(p.mu_prime) * E.norm(), 2);
	if (std::abs(det) <= 1e-12 * scale) {
		std::ostringstream os;
		os << "solve_case2: Omega is singular (|det| = " << std::abs(det) << ", c|p| = " << p.c * mom.norm()
		   << ", |mu'||E| = " << std::abs(p.mu_prime) * E.norm() << ", p.E = " << mom.dot(E)
		   << "); happens when p is perpendicular to E and c|p| = |mu'||E|";
		throw SingularOmega(os.str());
	}
	const CMat2 X = Om.inverse() * OmX;
	PhysicalParams pp = p;
	pp.q = 0;
	FieldPoint fx;
	fx.E = E;
	return block_diagonalize(build_dirac_pauli_matrix(pp, fx, p.c * sigma_dot(mom)), X);
}

/// sqrt(m^2c^4 + c^2p^2 + 2 mu' c (p x E).s + mu'^2 E^2)
inline CMat2 case2_upper(const PhysicalParams &p, const Vec3 &mom, const Vec3 &E)
{
	const double mc2 = p.m * p.c * p.c;
	const CMat2 S = (mc2 * mc2 + p.c * p.c * mom.squaredNorm() + p.mu_prime * p.mu_prime * E.squaredNorm()) *
	                    CMat2::Identity() +
	                2 * p.mu_prime * p.c * sigma_dot(mom.cross(E));
	return hermitian_function<2>(S, [](double l) { return std::sqrt(l); });
}

/// (1 + A)^{-1/2} = int exp(-pi eta^2 (1 + A)) d eta on [-eta_max, eta_max],
/// trapezoid rule with n_eta nodes and the Pade matrix exponential.
inline CMat2 gaussian_invsqrt(const CMat2 &A, int n_eta = 801, double eta_max = 12.0)
{
	if (!is_hermitian<2>(A, 1e-10)) {
		throw std::invalid_argument("gaussian_invsqrt: A must be Hermitian");
	}
	const CMat2 S = CMat2::Identity() + A;
	if (Eigen::LLT<CMat2>(S).info() != Eigen::Success) {
		throw std::invalid_argument("gaussian_invsqrt: 1 + A is not positive definite");
	}
	if (n_eta < 3 || !(eta_max > 0)) {
		throw std::invalid_argument("gaussian_invsqrt: need n_eta >= 3 and eta_max > 0");
	}
	const double h = 2 * eta_max / (n_eta - 1);
	CMat2 sum = CMat2::Zero();
	for (int i = 0; i < n_eta; ++i) {
		const double eta = -eta_max + i * h;
		const double w = (i == 0 || i == n_eta - 1) ? 0.5 : 1.0;
		const CMat2 arg = (-M_PI * eta * eta) * S;
		sum += w * arg.exp();
	}
	return h * sum;
}

struct SweepTable {
	std::vector<std::string> columns;
	std::vector<std::vector<double>> rows;

	std::string to_csv() const
	{
		std::ostringstream os;
		os.precision(12);
		for (std::size_t i = 0; i < columns.size(); ++i) {
			os << (i ? "," : "") << columns[i];
		}
		os << '\n';
		for (const auto &r : rows) {
			for (std::size_t i = 0; i < r.size(); ++i) {
				os << (i ? "," : "") << r[i];
			}
			os << '\n';
		}
		return os.str();
	}
	double column(std::size_t row, const std::string &name) const
	{
		for (std::size_t i = 0; i < columns.size(); ++i) {
			if (columns[i] == name) {
				return rows.at(row).at(i);
			}
		}
		throw std::out_of_range("SweepTable: no column " + name);
	}
};

struct SweepSpec {
	std::vector<double> pi_over_mc;
	Vec3 direction{0.6, 0.0, 0.8};
	Vec3 E{0.01, -0.02, 0.015};
	Vec3 B{-0.01, 0.02, 0.005};
	double phi = 0.0;
	std::vector<int> orders{10, 20, 30};
};

struct ClassicalComparison {
	double eigen_plus = 0, eigen_minus = 0;
	double classical_plus = 0, classical_minus = 0;
	double abs_diff = 0;
};

/// Eigenvalues of calHFW_closed against classical_H at s = (hbar/2) n, where n
/// is the spin expectation of each eigenvector.
inline ClassicalComparison classical_compare(const PhysicalParams &p, const FieldPoint &x)
{
	const CMat2 H = calHFW_closed(p, x);
	Eigen::SelfAdjointEigenSolver<CMat2> es(H);
	ClassicalComparison c;
	c.eigen_minus = es.eigenvalues()[0];
	c.eigen_plus = es.eigenvalues()[1];
	const Vec3 n_minus = spin_direction(es.eigenvectors().col(0));
	const Vec3 n_plus = spin_direction(es.eigenvectors().col(1));
	c.classical_minus = classical_H(p, x, 0.5 * p.hbar * n_minus);
	c.classical_plus = classical_H(p, x, 0.5 * p.hbar * n_plus);
	c.abs_diff = std::max(std::abs(c.eigen_minus - c.classical_minus), std::abs(c.eigen_plus - c.classical_plus));
	return c;
}

/// Relative Frobenius distance between the order-n partial sum of the
/// calH_FW series and calHFW_closed.
inline double series_relative_error(const FWHamiltonian &series, int order, const PhysicalParams &p,
                                    const FieldPoint &x)
{
	const CMat2 closed = calHFW_closed(p, x);
	const CMat2 partial = evaluate(series.poly.truncated(order), p, x, series.phi_sign);
	return (partial - closed).norm() / closed.norm();
}

inline SweepTable series_vs_closed_sweep(const PhysicalParams &p, const SweepSpec &spec)
{
	detail::require_mass(p, "series_vs_closed_sweep");
	if (spec.pi_over_mc.empty()) {
		throw std::invalid_argument("series_vs_closed_sweep: empty grid");
	}
	int max_order = 3;
	for (int o : spec.orders) {
		max_order = std::max(max_order, o);
	}
	const FWHamiltonian series = assemble_calHFW(max_order);
	SweepTable t;
	t.columns = {"pi_over_mc", "v_over_c", "Ex", "Ey", "Ez", "Bx", "By", "Bz", "eigenvalue_plus",
	             "eigenvalue_minus", "classical_plus", "classical_minus", "abs_diff", "closed_norm",
	             "within_radius"};
	for (int o : spec.orders) {
		t.columns.push_back("series_rel_err_order_" + std::to_string(o));
	}
	const Vec3 dir = spec.direction.normalized();
	for (double r : spec.pi_over_mc) {
		FieldPoint x;
		x.pi = r * p.m * p.c * dir;
		x.E = spec.E;
		x.B = spec.B;
		x.phi = spec.phi;
		const auto cc = classical_compare(p, x);
		std::vector<double> row{r,
		                        r / std::sqrt(1 + r * r),
		                        x.E.x(),
		                        x.E.y(),
		                        x.E.z(),
		                        x.B.x(),
		                        x.B.y(),
		                        x.B.z(),
		                        cc.eigen_plus,
		                        cc.eigen_minus,
		                        cc.classical_plus,
		                        cc.classical_minus,
		                        cc.abs_diff,
		                        calHFW_closed(p, x).norm(),
		                        r < 1.0 ? 1.0 : 0.0};
		for (int o : spec.orders) {
			row.push_back(series_relative_error(series, o, p, x));
		}
		t.rows.push_back(std::move(row));
	}
	return t;
}

} // namespace kfw

#endif
