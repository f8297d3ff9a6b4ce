#ifndef KFW_COEFFS_HPP
#define KFW_COEFFS_HPP

#include <cmath>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gaussian_rational.hpp"

namespace kfw
{

enum class CoeffKind { A, B, C, D, E_binom };

inline std::string_view to_string(CoeffKind k)
{
	switch (k) {
		case CoeffKind::A: return "A";
		case CoeffKind::B: return "B";
		case CoeffKind::C: return "C";
		case CoeffKind::D: return "D";
		case CoeffKind::E_binom: return "E";
	}
	return "?";
}

/// The coefficient sequences a_j (Catalan), b_j, c_j, d_j and the binomial
/// coefficients e_n = binom(1/2, n), built bottom-up for 0 <= j < size().
///
/// c_j and d_j are produced by their defining convolutions. The table is
/// immutable once built; `with_override` returns a modified copy (used to
/// exercise failure paths of the identity checks).
class CoeffTable
{
public:
	explicit CoeffTable(std::size_t size)
	{
		const std::size_t n = size + 2;
		a_.resize(n);
		b_.resize(n);
		c_.resize(n);
		d_.resize(n);
		e_.resize(n);

		// a_j = (2j)! / (j! (j+1)!)
		mpz_class binom = 1; // C(2j, j)
		for (std::size_t j = 0; j < n; ++j) {
			if (j > 0) {
				binom = binom * (2 * j) * (2 * j - 1) / (j * j);
			}
			a_[j] = BigRational(binom, j + 1);
			a_[j].canonicalize();
		}

		// b_0 = 0, b_j = (2j-1)!/(j!(j-1)!)
		mpz_class num = 1; // (2j-1)!
		mpz_class jf = 1;  // j!
		mpz_class jm1f = 1; // (j-1)!
		b_[0] = 0;
		for (std::size_t j = 1; j < n; ++j) {
			num *= (j == 1) ? mpz_class(1) : mpz_class((2 * j - 1) * (2 * j - 2));
			jm1f = jf;
			jf *= j;
			b_[j] = BigRational(num, jf * jm1f);
			b_[j].canonicalize();
		}

		// c_j = 2 sum_{j1+j2=j} b_{j1} b_{j2}
		for (std::size_t j = 0; j < n; ++j) {
			BigRational s = 0;
			for (std::size_t j1 = 0; j1 <= j; ++j1) {
				s += b_[j1] * b_[j - j1];
			}
			c_[j] = 2 * s;
		}

		// d_j = sum_{j1+j2+j3=j-2} 2(j1+1) a_{j1} a_{j2} a_{j3}, with the
		// inner pair sum aa_k = sum_{j2+j3=k} a_{j2} a_{j3} tabulated once.
		std::vector<BigRational> aa(n);
		for (std::size_t k = 0; k < n; ++k) {
			BigRational s = 0;
			for (std::size_t i = 0; i <= k; ++i) {
				s += a_[i] * a_[k - i];
			}
			aa[k] = s;
		}
		d_[0] = 0;
		if (n > 1) {
			d_[1] = 0;
		}
		for (std::size_t j = 2; j < n; ++j) {
			BigRational s = 0;
			for (std::size_t j1 = 0; j1 <= j - 2; ++j1) {
				s += 2 * static_cast<long>(j1 + 1) * a_[j1] * aa[j - 2 - j1];
			}
			d_[j] = s;
		}

		// e_n = binom(1/2, n)
		e_[0] = 1;
		for (std::size_t k = 1; k < n; ++k) {
			e_[k] = e_[k - 1] * BigRational(mpz_class(1) - 2 * mpz_class(static_cast<unsigned long>(k - 1)),
			                                 2 * mpz_class(static_cast<unsigned long>(k)));
			e_[k].canonicalize();
		}
		size_ = size;
	}

	std::size_t size() const { return size_; }

	const BigRational &operator()(CoeffKind kind, std::size_t j) const
	{
		if (j >= size_ + 2) {
			throw std::out_of_range("coefficient index " + std::to_string(j) + " beyond table size "
			                        + std::to_string(size_));
		}
		return seq(kind)[j];
	}

	CoeffTable with_override(CoeffKind kind, std::size_t j, BigRational value) const
	{
		CoeffTable t = *this;
		t.mut_seq(kind).at(j) = std::move(value);
		return t;
	}

private:
	const std::vector<BigRational> &seq(CoeffKind k) const
	{
		switch (k) {
			case CoeffKind::A: return a_;
			case CoeffKind::B: return b_;
			case CoeffKind::C: return c_;
			case CoeffKind::D: return d_;
			case CoeffKind::E_binom: return e_;
		}
		throw std::logic_error("bad CoeffKind");
	}
	std::vector<BigRational> &mut_seq(CoeffKind k) { return const_cast<std::vector<BigRational> &>(seq(k)); }

	std::size_t size_ = 0;
	std::vector<BigRational> a_, b_, c_, d_, e_;
};

/// Shared, lazily grown table. Readers get an immutable snapshot.
inline std::shared_ptr<const CoeffTable> shared_coefficients(std::size_t min_size)
{
	static std::mutex mtx;
	static std::shared_ptr<const CoeffTable> cache = std::make_shared<const CoeffTable>(64);
	std::lock_guard<std::mutex> lock(mtx);
	if (cache->size() < min_size) {
		cache = std::make_shared<const CoeffTable>(std::max(min_size, 2 * cache->size()));
	}
	return cache;
}

inline BigRational coeff(CoeffKind kind, std::size_t j) { return (*shared_coefficients(j + 1))(kind, j); }

// ---------------------------------------------------------------------------
// Combinatorial identities

enum class Identity { A, B, C, D, E, F };

inline std::string_view to_string(Identity id)
{
	constexpr std::string_view names[] = {"A", "B", "C", "D", "E", "F"};
	return names[static_cast<int>(id)];
}

inline std::optional<Identity> identity_from_string(std::string_view s)
{
	for (int i = 0; i < 6; ++i) {
		if (s == to_string(static_cast<Identity>(i))) {
			return static_cast<Identity>(i);
		}
	}
	return std::nullopt;
}

/// Smallest j at which an identity is stated.
inline std::size_t identity_first_j(Identity id)
{
	switch (id) {
		case Identity::A:
		case Identity::B:
		case Identity::C: return 1;
		case Identity::D:
		case Identity::F: return 0;
		case Identity::E: return 2;
	}
	return 0;
}

struct IdentityRecord {
	Identity identity;
	std::size_t j;
	BigRational lhs;
	BigRational rhs;
	bool pass;
};

struct IdentityReport {
	Identity identity;
	std::vector<IdentityRecord> records;

	bool pass() const
	{
		for (const auto &r : records) {
			if (!r.pass) {
				return false;
			}
		}
		return true;
	}
	const IdentityRecord *first_failure() const
	{
		for (const auto &r : records) {
			if (!r.pass) {
				return &r;
			}
		}
		return nullptr;
	}
};

namespace detail
{

inline BigRational conv2(const CoeffTable &t, CoeffKind x, CoeffKind y, std::size_t n)
{
	BigRational s = 0;
	for (std::size_t i = 0; i <= n; ++i) {
		s += t(x, i) * t(y, n - i);
	}
	return s;
}

} // namespace detail

/// Evaluates one identity at index j. Both sides are exact.
///
///   A: sum_{j1+j2=j-1} a a            = a_j
///   B: 2 sum_{j1+j2=j-1} a b          = b_j - a_{j-1}         (and = 2(j-1) a_{j-1})
///   C: 2 sum_{j1+j2=j-1} a c          = c_j - 2(j-1) a_{j-1}  (and = 4 sum a b b)
///   D: b_{j+1} + c_{j+1}              = 4 b_j + 4 c_j + a_j
///   E: 2 sum_{j1+j2=j-1} a d + 2a_{j-1} = d_j
///   F: b_{j+1} - a_j                  = d_{j+1}
inline IdentityRecord check_identity(const CoeffTable &t, Identity id, std::size_t j)
{
	using K = CoeffKind;
	IdentityRecord r{id, j, 0, 0, false};
	bool extra = true;
	switch (id) {
		case Identity::A:
			r.lhs = detail::conv2(t, K::A, K::A, j - 1);
			r.rhs = t(K::A, j);
			break;
		case Identity::B:
			r.lhs = 2 * detail::conv2(t, K::A, K::B, j - 1);
			r.rhs = t(K::B, j) - t(K::A, j - 1);
			extra = r.rhs == BigRational(2 * (static_cast<long>(j) - 1)) * t(K::A, j - 1);
			break;
		case Identity::C: {
			r.lhs = 2 * detail::conv2(t, K::A, K::C, j - 1);
			r.rhs = t(K::C, j) - BigRational(2 * (static_cast<long>(j) - 1)) * t(K::A, j - 1);
			BigRational abb = 0;
			for (std::size_t j1 = 0; j1 <= j - 1; ++j1) {
				abb += t(K::A, j1) * detail::conv2(t, K::B, K::B, j - 1 - j1);
			}
			extra = 4 * abb == r.lhs;
			break;
		}
		case Identity::D:
			r.lhs = t(K::B, j + 1) + t(K::C, j + 1);
			r.rhs = 4 * t(K::B, j) + 4 * t(K::C, j) + t(K::A, j);
			break;
		case Identity::E:
			r.lhs = 2 * detail::conv2(t, K::A, K::D, j - 1) + 2 * t(K::A, j - 1);
			r.rhs = t(K::D, j);
			break;
		case Identity::F:
			r.lhs = t(K::B, j + 1) - t(K::A, j);
			r.rhs = t(K::D, j + 1);
			break;
	}
	r.pass = extra && r.lhs == r.rhs;
	return r;
}

inline IdentityReport verify_identity(const CoeffTable &t, Identity id, std::size_t j_max)
{
	if (j_max < 1) {
		throw std::invalid_argument("verify_identity: j_max must be >= 1");
	}
	IdentityReport rep{id, {}};
	for (std::size_t j = identity_first_j(id); j <= j_max; ++j) {
		rep.records.push_back(check_identity(t, id, j));
	}
	return rep;
}

inline IdentityReport verify_identity(Identity id, std::size_t j_max)
{
	return verify_identity(*shared_coefficients(j_max + 2), id, j_max);
}

// ---------------------------------------------------------------------------
// Generating functions

enum class SeriesKind { Fa, Fb, Fc, Fd, Sqrt, InvSqrt };

inline std::string_view to_string(SeriesKind k)
{
	constexpr std::string_view names[] = {"Fa", "Fb", "Fc", "Fd", "Sqrt", "InvSqrt"};
	return names[static_cast<int>(k)];
}

/// Closed forms of the coefficient generating functions:
///   Fa = x / (1 + sqrt(1+x^2))
///   Fb = (1/2) (1/(1+sqrt(1+x^2)) - 1/sqrt(1+x^2))
///   Fc = 2 Fb^2
///   Fd = (1/sqrt(1+x^2)) (1/(1+sqrt(1+x^2)))^2
inline double closed_form(SeriesKind kind, double x)
{
	const double g = std::sqrt(1.0 + x * x);
	switch (kind) {
		case SeriesKind::Fa: return x / (1.0 + g);
		case SeriesKind::Fb: return 0.5 * (1.0 / (1.0 + g) - 1.0 / g);
		case SeriesKind::Fc: {
			const double fb = 0.5 * (1.0 / (1.0 + g) - 1.0 / g);
			return 2.0 * fb * fb;
		}
		case SeriesKind::Fd: return (1.0 / g) / ((1.0 + g) * (1.0 + g));
		case SeriesKind::Sqrt: return g;
		case SeriesKind::InvSqrt: return 1.0 / g;
	}
	return 0.0;
}

/// Exact rational weight w_n and power p_n of the n-th term (n >= 0) of a
/// series, so that term_n(x) = w_n x^{p_n}.
inline std::pair<BigRational, int> series_term(const CoeffTable &t, SeriesKind kind, std::size_t n)
{
	using K = CoeffKind;
	auto sign = [](std::size_t j) { return (j % 2 == 0) ? BigRational(1) : BigRational(-1); };
	auto pow2 = [](std::size_t e) {
		mpz_class p;
		mpz_ui_pow_ui(p.get_mpz_t(), 2, e);
		return BigRational(p);
	};
	const int ni = static_cast<int>(n);
	switch (kind) {
		case SeriesKind::Fa: return {t(K::A, n) * sign(n) / pow2(2 * n + 1), 2 * ni + 1};
		case SeriesKind::Fb: {
			const std::size_t j = n + 1;
			return {t(K::B, j) * sign(j) / pow2(2 * j), 2 * ni};
		}
		case SeriesKind::Fc: {
			const std::size_t j = n + 2;
			return {t(K::C, j) * sign(j) / pow2(2 * j), 2 * ni};
		}
		case SeriesKind::Fd: {
			const std::size_t j = n + 2;
			return {t(K::D, j) * sign(j) / pow2(2 * j - 1), 2 * ni};
		}
		case SeriesKind::Sqrt:
			if (n == 0) {
				return {BigRational(1), 0};
			}
			return {t(K::A, n - 1) * sign(n - 1) / pow2(2 * n - 1), 2 * ni};
		case SeriesKind::InvSqrt:
			return {(t(K::A, n) + t(K::B, n + 1)) * sign(n) / pow2(2 * n + 1), 2 * ni};
	}
	return {BigRational(0), 0};
}

/// Sum of the first J terms of the named series at x.
inline double partial_sum(SeriesKind kind, double x, std::size_t J)
{
	const auto table = shared_coefficients(J + 3);
	double s = 0.0;
	for (std::size_t n = 0; n < J; ++n) {
		const auto [w, p] = series_term(*table, kind, n);
		s += w.get_d() * std::pow(x, p);
	}
	return s;
}

} // namespace kfw

#endif
