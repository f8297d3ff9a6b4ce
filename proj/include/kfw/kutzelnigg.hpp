#ifndef KFW_KUTZELNIGG_HPP
#define KFW_KUTZELNIGG_HPP

#include <map>
#include <stdexcept>
#include <string_view>

#include "algebra.hpp"
#include "coeffs.hpp"

// Order-by-order solution of the block-diagonalization condition for the
// Dirac and Dirac-Pauli Hamiltonians in static homogeneous fields.
//
// Series entries X_n are stored in "index form": the overall 1/c^n is
// stripped, but the 1/c hidden in eps = q hbar / c is kept in the grade.
// Assembled Hamiltonians carry their true powers of c and are truncated by
// order in 1/c.

namespace kfw
{

enum class SeriesLabel { X, Xprime, CalX, HFW_orders, HprimeFW_orders, XdagX_orders };

inline std::string_view to_string(SeriesLabel l)
{
	switch (l) {
		case SeriesLabel::X: return "X";
		case SeriesLabel::Xprime: return "Xprime";
		case SeriesLabel::CalX: return "CalX";
		case SeriesLabel::HFW_orders: return "HFW_orders";
		case SeriesLabel::HprimeFW_orders: return "HprimeFW_orders";
		case SeriesLabel::XdagX_orders: return "XdagX_orders";
	}
	return "?";
}

struct SeriesTable {
	SeriesLabel label = SeriesLabel::X;
	std::map<int, OperatorPoly> entries;

	const OperatorPoly &entry(int n) const
	{
		static const OperatorPoly zero;
		auto it = entries.find(n);
		return it == entries.end() ? zero : it->second;
	}
	int max_order() const { return entries.empty() ? 0 : entries.rbegin()->first; }
};

namespace detail
{

inline UnitGrade g_m(int p) { return {p, 0, 0, 0, 0}; }
inline const UnitGrade g_q{0, 0, 0, 1, 0};
inline const UnitGrade g_mu{0, 0, 0, 0, 1};

inline OperatorPoly sigma_field(Field f) { return OperatorPoly::term(1, {}, {TailKind::SigmaField, 0, f}); }

inline GaussianRational sign(int j) { return (j % 2 == 0) ? GaussianRational(1) : GaussianRational(-1); }

inline BigRational pow2(int e)
{
	BigRational r(1);
	mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
	return r;
}

// 1/(2m)
inline OperatorPoly over_2m(const OperatorPoly &p) { return p.scaled(BigRational(1, 2), g_m(-1)); }

} // namespace detail

/// X_1 ... X_N by the Dirac recursion
///   2m X_n = -sum_{k1+k2=n-1} X_k1 (s.pi) X_k2 + q [phi, X_{n-2}].
inline SeriesTable dirac_series(int N)
{
	using namespace detail;
	if (N < 1) {
		throw std::invalid_argument("dirac_series: N must be >= 1");
	}
	SeriesTable t{SeriesLabel::X, {}};
	const OperatorPoly sp = OperatorPoly::sigma_pi();
	t.entries[1] = over_2m(sp);
	if (N >= 2) {
		t.entries[2] = OperatorPoly{};
	}
	for (int n = 3; n <= N; ++n) {
		OperatorPoly rhs;
		for (int k1 = 1; k1 <= n - 2; ++k1) {
			const auto &a = t.entry(k1);
			const auto &b = t.entry(n - 1 - k1);
			if (a.is_zero() || b.is_zero()) {
				continue;
			}
			rhs -= mul(mul(a, sp), b);
		}
		rhs += commutator_phi(t.entry(n - 2)).scaled(1, g_q);
		t.entries[n] = over_2m(rhs);
	}
	return t;
}

/// X'_1 ... X'_N (N >= 3) by the primed recursion, taking X from `x`.
inline SeriesTable pauli_series(int N, const SeriesTable &x)
{
	using namespace detail;
	if (N < 3) {
		throw std::invalid_argument("pauli_series: N must be >= 3");
	}
	if (x.max_order() < N) {
		throw std::invalid_argument("pauli_series: X table too short");
	}
	SeriesTable t{SeriesLabel::Xprime, {}};
	const OperatorPoly sp = OperatorPoly::sigma_pi();
	const OperatorPoly sE = sigma_field(Field::E);
	const OperatorPoly sB = sigma_field(Field::B);
	t.entries[1] = OperatorPoly{};
	t.entries[2] = OperatorPoly{};
	t.entries[3] = over_2m(sE.scaled(GaussianRational(0, -1), g_mu));
	for (int n = 4; n <= N; ++n) {
		OperatorPoly rhs;
		for (int k1 = 1; k1 <= n - 2; ++k1) {
			const int k2 = n - 1 - k1;
			const auto &X1 = x.entry(k1);
			const auto &P1 = t.entry(k1);
			const auto &X2 = x.entry(k2);
			const auto &P2 = t.entry(k2);
			rhs -= mul(mul(X1, sp), P2) + mul(mul(P1, sp), X2) + mul(mul(P1, sp), P2);
		}
		OperatorPoly e_part;
		for (int k1 = 1; k1 <= n - 4; ++k1) {
			const int k2 = n - 3 - k1;
			const OperatorPoly left = x.entry(k1) + t.entry(k1);
			const OperatorPoly right = x.entry(k2) + t.entry(k2);
			e_part += mul(mul(left, sE), right);
		}
		rhs += e_part.scaled(GaussianRational(0, -1), g_mu);
		rhs += commutator_phi(t.entry(n - 2)).scaled(1, g_q);
		rhs += anticommutator(x.entry(n - 3) + t.entry(n - 3), sB).scaled(1, g_mu);
		t.entries[n] = over_2m(rhs);
	}
	return t;
}

inline SeriesTable pauli_series(int N) { return pauli_series(N, dirac_series(N)); }

/// The full Dirac-Pauli operator calX_n = X_n + X'_n, solved directly from
/// its own recursion (independent of the X/X' split).
inline SeriesTable calX_series(int N)
{
	using namespace detail;
	if (N < 1) {
		throw std::invalid_argument("calX_series: N must be >= 1");
	}
	SeriesTable t{SeriesLabel::CalX, {}};
	const OperatorPoly sp = OperatorPoly::sigma_pi();
	const OperatorPoly sE = sigma_field(Field::E);
	const OperatorPoly sB = sigma_field(Field::B);
	t.entries[1] = over_2m(sp);
	for (int n = 2; n <= N; ++n) {
		OperatorPoly rhs;
		for (int k1 = 1; k1 <= n - 2; ++k1) {
			rhs -= mul(mul(t.entry(k1), sp), t.entry(n - 1 - k1));
		}
		if (n >= 2) {
			rhs += commutator_phi(t.entry(n - 2)).scaled(1, g_q);
		}
		OperatorPoly e_part;
		if (n == 3) {
			e_part = sE;
		}
		for (int k1 = 1; k1 <= n - 4; ++k1) {
			e_part += mul(mul(t.entry(k1), sE), t.entry(n - 3 - k1));
		}
		rhs += e_part.scaled(GaussianRational(0, -1), g_mu);
		if (n >= 4) {
			rhs += anticommutator(t.entry(n - 3), sB).scaled(1, g_mu);
		}
		t.entries[n] = over_2m(rhs);
	}
	return t;
}

enum class Theorem { T1, T2 };

/// Closed form of X_n (T1) or X'_n (T2) built from the coefficient tables.
inline OperatorPoly theorem_closed_form(Theorem which, int n)
{
	using namespace detail;
	const UnitGrade iqh{0, 0, 1, 1, 0};
	const GaussianRational I = GaussianRational::i();
	OperatorPoly out;
	if (which == Theorem::T1) {
		if (n < 0) {
			throw std::invalid_argument("theorem_closed_form: n must be >= 0");
		}
		if (n % 2 == 0) {
			return out;
		}
		const int j = (n - 1) / 2;
		auto tab = shared_coefficients(static_cast<std::size_t>(j) + 1);
		const auto &t = *tab;
		const GaussianRational s = sign(j);
		out += sigma_pi_power(static_cast<unsigned>(n))
		           .scaled(s * GaussianRational(t(CoeffKind::A, j) / pow2(2 * j + 1)), g_m(-(2 * j + 1)));
		if (j >= 1) {
			out.add(I * s * GaussianRational(t(CoeffKind::B, j) / pow2(2 * j)), iqh + g_m(-2 * j),
			        {TailKind::SigmaField, j - 1, Field::E});
		}
		if (j >= 2) {
			out.add(I * s * GaussianRational(t(CoeffKind::C, j) / pow2(2 * j)), iqh + g_m(-2 * j),
			        {TailKind::SigmaPiFieldDot, j - 2, Field::E});
		}
		return out;
	}
	if (n < 2) {
		throw std::invalid_argument("theorem_closed_form: T2 requires n >= 2");
	}
	const int j = n / 2;
	auto tab = shared_coefficients(static_cast<std::size_t>(j) + 1);
	const auto &t = *tab;
	if (n % 2 == 0) {
		if (j >= 2) {
			out.add(sign(j) * GaussianRational(2 * t(CoeffKind::B, j - 1) / pow2(2 * j - 2)),
			        g_mu + g_m(-(2 * j - 2)), {TailKind::FieldDot, j - 2, Field::B});
		}
		return out;
	}
	out.add(I * sign(j) * GaussianRational(t(CoeffKind::B, j) / pow2(2 * j - 1)), g_mu + g_m(-(2 * j - 1)),
	        {TailKind::SigmaField, j - 1, Field::E});
	if (j >= 2) {
		out.add(I * sign(j + 1) * GaussianRational(t(CoeffKind::D, j) / pow2(2 * j - 1)), g_mu + g_m(-(2 * j - 1)),
		        {TailKind::SigmaPiFieldDot, j - 2, Field::E});
	}
	return out;
}

/// sum_{n <= n_max} entry(n) / c^n, truncated at order `max_order`.
inline OperatorPoly resum(const SeriesTable &t, int n_max, int max_order)
{
	OperatorPoly out;
	for (const auto &[n, p] : t.entries) {
		if (n <= n_max) {
			out += p.scaled(1, UnitGrade{0, -n, 0, 0, 0});
		}
	}
	return out.truncated(max_order);
}

/// (1 + A)^alpha as a binomial series in A, where every term of A has order
/// at least 1 in 1/c. Truncated at `max_order`.
inline OperatorPoly binomial_series(const OperatorPoly &A, const BigRational &alpha, int max_order)
{
	const auto lo = A.min_order();
	if (!lo) {
		return OperatorPoly::one();
	}
	if (*lo < 1) {
		throw std::invalid_argument("binomial_series: argument must vanish at order 0");
	}
	OperatorPoly out = OperatorPoly::one();
	OperatorPoly pw = OperatorPoly::one();
	BigRational coef(1);
	for (int n = 1; n * *lo <= max_order; ++n) {
		coef *= (alpha - (n - 1));
		coef /= n;
		pw = mul(pw, A, max_order);
		out += pw.scaled(GaussianRational(coef));
	}
	return out;
}

/// sqrt(1 + A), with the coefficients e_n = binom(1/2, n) from the table.
inline OperatorPoly sqrt_series(const OperatorPoly &A, int max_order)
{
	const auto lo = A.min_order();
	if (!lo) {
		return OperatorPoly::one();
	}
	if (*lo < 1) {
		throw std::invalid_argument("sqrt_series: argument must vanish at order 0");
	}
	auto tab = shared_coefficients(static_cast<std::size_t>(max_order / *lo) + 1);
	OperatorPoly out = OperatorPoly::one();
	OperatorPoly pw = OperatorPoly::one();
	for (int n = 1; n * *lo <= max_order; ++n) {
		pw = mul(pw, A, max_order);
		out += pw.scaled(GaussianRational((*tab)(CoeffKind::E_binom, n)));
	}
	return out;
}

/// A block Hamiltonian as a polynomial plus an additive q*phi marker
/// (phi itself is not a polynomial atom).
struct FWHamiltonian {
	OperatorPoly poly;
	int phi_sign = 1; ///< coefficient of q*phi
	int max_order = 0;

	SeriesTable orders(SeriesLabel label = SeriesLabel::HFW_orders) const
	{
		SeriesTable t{label, {}};
		for (const auto &[k, c] : poly.terms()) {
			t.entries[k.grade.order()].add(c, k.grade, k.mono);
		}
		return t;
	}
	OperatorPoly hermitian() const { return hermitian_part(poly); }
	OperatorPoly antihermitian() const { return antihermitian_part(poly); }
};

namespace detail
{

inline OperatorPoly rest_energy() { return OperatorPoly::scalar(1, {1, 2, 0, 0, 0}); }
inline OperatorPoly c_sigma_pi() { return OperatorPoly::term(1, {0, 1, 0, 0, 0}, {TailKind::SigmaPi, 0}); }
// mu' = mu'' / c
inline const UnitGrade g_mu_prime{0, -1, 0, 0, 1};

inline void check_order(int N, int lo, const char *who)
{
	if (N < lo) {
		throw std::invalid_argument(std::string(who) + ": order too small");
	}
}

// S (q phi) S^{-1} - q phi = -q [phi, S] S^{-1}
inline OperatorPoly phi_conjugation(const OperatorPoly &S, const OperatorPoly &S_inv, int N)
{
	return mul(commutator_phi(S), S_inv, N).scaled(-1, g_q);
}

} // namespace detail

/// H_FW through order N in 1/c via the commutator lemma:
///   mc^2 + q phi - q [phi, X^dag X] (1/2)(1 + X^dag X)^{-1} + c (s.pi) X
inline FWHamiltonian assemble_HFW(int N)
{
	using namespace detail;
	check_order(N, 2, "assemble_HFW");
	const OperatorPoly X = resum(dirac_series(N + 1), N + 1, N + 1);
	const OperatorPoly XdX = mul(dagger(X), X, N);
	const OperatorPoly inv = binomial_series(XdX, -1, N);
	OperatorPoly H = rest_energy();
	H += mul(commutator_phi(XdX), inv, N).scaled(BigRational(-1, 2), g_q);
	H += mul(c_sigma_pi(), X, N);
	return {H.truncated(N), 1, N};
}

/// H_FW through order N by literal conjugation with sqrt(1 + X^dag X).
inline FWHamiltonian assemble_HFW_direct(int N)
{
	using namespace detail;
	check_order(N, 2, "assemble_HFW_direct");
	const OperatorPoly X = resum(dirac_series(N + 1), N + 1, N + 1);
	const OperatorPoly XdX = mul(dagger(X), X, N);
	const OperatorPoly S = sqrt_series(XdX, N);
	const OperatorPoly S_inv = binomial_series(XdX, BigRational(-1, 2), N);
	OperatorPoly H = rest_energy();
	H += phi_conjugation(S, S_inv, N);
	H += mul(mul(S, mul(c_sigma_pi(), X, N), N), S_inv, N);
	return {H.truncated(N), 1, N};
}

/// X^dag X through order N.
inline OperatorPoly XdagX(int N)
{
	const OperatorPoly X = resum(dirac_series(N), N, N);
	return mul(dagger(X), X, N);
}

/// The resummable form
///   mc^2 + q phi + c sum a_j (-1)^j (s.pi)^{2j+2} / (2mc)^{2j+1}
///        + q hbar sum_{j>=1} b_j (-1)^j pi^{2j-2} ((E x pi).s) / (2mc)^{2j}
inline FWHamiltonian HFW_series_oracle(int N)
{
	using namespace detail;
	auto tab = shared_coefficients(static_cast<std::size_t>(N) + 2);
	const auto &t = *tab;
	OperatorPoly H = rest_energy();
	for (int j = 0; 2 * j <= N; ++j) {
		const BigRational w = t(CoeffKind::A, j) / pow2(2 * j + 1);
		H += sigma_pi_power(static_cast<unsigned>(2 * j + 2)).scaled(sign(j) * GaussianRational(w),
		                                                              {-(2 * j + 1), -2 * j, 0, 0, 0});
		if (j >= 1) {
			H.add(sign(j) * GaussianRational(t(CoeffKind::B, j) / pow2(2 * j)), {-2 * j, -2 * j, 1, 1, 0},
			      {TailKind::CrossSigma, j - 1, Field::E});
		}
	}
	return {H.truncated(N), 1, N};
}

/// The Pauli part of the Dirac-Pauli Hamiltonian,
///   H'_FW = c (s.pi) X' - mu' (s.B) + i mu' (s.E) X
inline OperatorPoly assemble_HprimeFW_poly(int N, const SeriesTable &x, const SeriesTable &xp)
{
	using namespace detail;
	const OperatorPoly X = resum(x, N + 1, N + 1);
	const OperatorPoly Xp = resum(xp, N + 1, N + 1);
	OperatorPoly H = mul(c_sigma_pi(), Xp, N);
	H += sigma_field(Field::B).scaled(-1, g_mu_prime);
	H += mul(sigma_field(Field::E), X, N).scaled(GaussianRational::i(), g_mu_prime);
	return H.truncated(N);
}

/// calH_FW = H_FW + H'_FW through order N.
inline FWHamiltonian assemble_calHFW(int N)
{
	using namespace detail;
	check_order(N, 3, "assemble_calHFW");
	const SeriesTable x = dirac_series(N + 1);
	const SeriesTable xp = pauli_series(N + 1, x);
	FWHamiltonian H = assemble_HFW(N);
	H.poly += assemble_HprimeFW_poly(N, x, xp);
	return H;
}

/// calH_FW through order N by literal conjugation with sqrt(1 + calX^dag calX),
/// using the calX recursion on its own.
inline FWHamiltonian assemble_calHFW_direct(int N)
{
	using namespace detail;
	check_order(N, 3, "assemble_calHFW_direct");
	const OperatorPoly X = resum(calX_series(N + 1), N + 1, N + 1);
	const OperatorPoly XdX = mul(dagger(X), X, N);
	const OperatorPoly S = sqrt_series(XdX, N);
	const OperatorPoly S_inv = binomial_series(XdX, BigRational(-1, 2), N);
	OperatorPoly inner = mul(c_sigma_pi(), X, N);
	inner += sigma_field(Field::B).scaled(-1, g_mu_prime);
	inner += mul(sigma_field(Field::E), X, N).scaled(GaussianRational::i(), g_mu_prime);
	OperatorPoly H = rest_energy();
	H += phi_conjugation(S, S_inv, N);
	H += mul(mul(S, inner, N), S_inv, N);
	return {H.truncated(N), 1, N};
}

/// HFW_series_oracle plus the hermitian Pauli part
///   -2 mu' sum b_j (-1)^j pi^{2j-2} (s.pi)(B.pi) / (2mc)^{2j}
///   + mu' [sum_{j>=1} b_j (-1)^j pi^{2j-2} / (2mc)^{2j-1}
///          - sum_{j>=0} a_j (-1)^j pi^{2j} / (2mc)^{2j+1}] ((E x pi).s)
///   - mu' (s.B)
inline FWHamiltonian calHFW_series_oracle(int N)
{
	using namespace detail;
	auto tab = shared_coefficients(static_cast<std::size_t>(N) + 2);
	const auto &t = *tab;
	FWHamiltonian H = HFW_series_oracle(N);
	OperatorPoly P = sigma_field(Field::B).scaled(-1, g_mu_prime);
	for (int j = 0; 2 * j <= N + 1; ++j) {
		if (j >= 1) {
			const BigRational bj = t(CoeffKind::B, j);
			P.add(sign(j) * GaussianRational(-2 * bj / pow2(2 * j)), g_mu_prime + UnitGrade{-2 * j, -2 * j, 0, 0, 0},
			      {TailKind::SigmaPiFieldDot, j - 1, Field::B});
			P.add(sign(j) * GaussianRational(bj / pow2(2 * j - 1)),
			      g_mu_prime + UnitGrade{-(2 * j - 1), -(2 * j - 1), 0, 0, 0}, {TailKind::CrossSigma, j - 1, Field::E});
		}
		P.add(sign(j) * GaussianRational(-t(CoeffKind::A, j) / pow2(2 * j + 1)),
		      g_mu_prime + UnitGrade{-(2 * j + 1), -(2 * j + 1), 0, 0, 0}, {TailKind::CrossSigma, j, Field::E});
	}
	H.poly += P.truncated(N);
	return H;
}

/// Lower block by charge conjugation plus an overall sign.
inline FWHamiltonian lower_block(const FWHamiltonian &upper)
{
	// q phi -> (-q) phi under conjugation, then the overall minus sign
	return {-charge_conjugate(upper.poly), upper.phi_sign, upper.max_order};
}

/// Lower block assembled on its own:
///   Z^{-1} (H_- - H_0^dag calX^dag) Z,  Z = (1 + calX calX^dag)^{-1/2}
/// with H_- = -mc^2 + q phi + mu' (s.B) and H_0^dag = c (s.pi) - i mu' (s.E).
inline FWHamiltonian lower_block_direct(int N)
{
	using namespace detail;
	check_order(N, 3, "lower_block_direct");
	const OperatorPoly X = resum(calX_series(N + 1), N + 1, N + 1);
	const OperatorPoly Xd = dagger(X);
	const OperatorPoly XXd = mul(X, Xd, N);
	const OperatorPoly Z_inv = sqrt_series(XXd, N);
	const OperatorPoly Z = binomial_series(XXd, BigRational(-1, 2), N);
	OperatorPoly H0d = c_sigma_pi();
	H0d += sigma_field(Field::E).scaled(GaussianRational(0, -1), g_mu_prime);
	OperatorPoly inner = sigma_field(Field::B).scaled(1, g_mu_prime);
	inner -= mul(H0d, Xd, N);
	OperatorPoly H = -rest_energy();
	// Z^{-1} q phi Z - q phi = q Z^{-1} [phi, Z]
	H += mul(Z_inv, commutator_phi(Z), N).scaled(1, g_q);
	H += mul(mul(Z_inv, inner, N), Z, N);
	return {H.truncated(N), 1, N};
}

/// Terms of the (F.pi) family, the only place an antihermitian remainder
/// could sit.
inline OperatorPoly field_dot_family(const OperatorPoly &p, Field f)
{
	return p.filtered([f](const TermKey &k) { return k.mono.kind == TailKind::FieldDot && k.mono.field == f; });
}

} // namespace kfw

#endif
