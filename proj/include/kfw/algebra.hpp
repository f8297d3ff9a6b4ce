#ifndef KFW_ALGEBRA_HPP
#define KFW_ALGEBRA_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "gaussian_rational.hpp"

// Normal-form engine for 2x2 operator expressions built from sigma, pi and a
// static homogeneous field (E, B), kept to first order in the field.
//
// Every term is  coeff * m^a c^b hbar^h q^r mu''^s * pi^{2k} * tail  with tail
// one of
//
//   One                1
//   SigmaPi            (s.pi)
//   FieldDot(F)        (F.pi)
//   SigmaField(F)      (s.F)
//   SigmaPiFieldDot(F) (s.pi)(F.pi)
//   CrossSigma(F)      ((F x pi).s)
//
// and the pi^{2k} factor always written to the left. Inside field-linear terms
// the components of pi commute (their commutators carry a second field
// factor). Between field-free factors they do not: [pi_i, pi_j] = i eps
// epsilon_ijk B_k with eps = q hbar / c, which is what produces
//
//   (s.pi)(s.pi)    = pi^2 - eps (s.B)
//   (s.pi) pi^{2l}  = pi^{2l} (s.pi) - 2 i l eps pi^{2l-2} ((B x pi).s)

namespace kfw
{

enum class Field : std::uint8_t { E = 0, B = 1 };

enum class TailKind : std::uint8_t { One = 0, SigmaPi, FieldDot, SigmaField, SigmaPiFieldDot, CrossSigma };

inline bool carries_field(TailKind t) { return t != TailKind::One && t != TailKind::SigmaPi; }

inline std::string_view to_string(Field f) { return f == Field::E ? "E" : "B"; }

/// Exponents of the dimensional symbols. `mu` counts mu'' = c mu'.
struct UnitGrade {
	int m = 0;
	int c = 0;
	int hbar = 0;
	int q = 0;
	int mu = 0;

	UnitGrade &operator+=(const UnitGrade &o)
	{
		m += o.m;
		c += o.c;
		hbar += o.hbar;
		q += o.q;
		mu += o.mu;
		return *this;
	}
	friend UnitGrade operator+(UnitGrade a, const UnitGrade &b) { return a += b; }
	friend bool operator==(const UnitGrade &, const UnitGrade &) = default;

	/// Order in 1/c.
	int order() const { return -c; }

	static UnitGrade eps() { return {0, -1, 1, 1, 0}; }
};

struct MonomialTail {
	TailKind kind = TailKind::One;
	Field field = Field::E; ///< meaningful only when carries_field(kind)
	int k = 0;              ///< power of pi^2

	MonomialTail() = default;
	MonomialTail(TailKind t, int k_, Field f = Field::E) : kind(t), field(carries_field(t) ? f : Field::E), k(k_)
	{
		if (k_ < 0) {
			throw std::invalid_argument("MonomialTail: negative power of pi^2");
		}
	}

	bool has_field() const { return carries_field(kind); }
	friend bool operator==(const MonomialTail &, const MonomialTail &) = default;
};

struct TermKey {
	UnitGrade grade;
	MonomialTail mono;

	friend bool operator==(const TermKey &, const TermKey &) = default;
	friend bool operator<(const TermKey &a, const TermKey &b)
	{
		// higher powers of c first, then of m; then tail order, field, k
		auto tie = [](const TermKey &t) {
			return std::make_tuple(-t.grade.c, -t.grade.m, t.grade.hbar, t.grade.q, t.grade.mu,
			                       static_cast<int>(t.mono.kind), static_cast<int>(t.mono.field), t.mono.k);
		};
		return tie(a) < tie(b);
	}
};

struct OperatorTerm {
	GaussianRational coeff;
	UnitGrade grade;
	MonomialTail mono;
};

class OperatorPoly
{
public:
	using map_type = std::map<TermKey, GaussianRational>;

	OperatorPoly() = default;

	static OperatorPoly scalar(GaussianRational c, UnitGrade g = {})
	{
		OperatorPoly p;
		p.add(std::move(c), g, MonomialTail{});
		return p;
	}
	static OperatorPoly one() { return scalar(1); }
	static OperatorPoly term(GaussianRational c, UnitGrade g, MonomialTail t)
	{
		OperatorPoly p;
		p.add(std::move(c), g, t);
		return p;
	}
	static OperatorPoly sigma_pi() { return term(1, {}, {TailKind::SigmaPi, 0}); }

	void add(const GaussianRational &c, const UnitGrade &g, const MonomialTail &t)
	{
		if (c.is_zero()) {
			return;
		}
		TermKey key{g, t};
		auto it = terms_.find(key);
		if (it == terms_.end()) {
			terms_.emplace(key, c);
			return;
		}
		it->second += c;
		if (it->second.is_zero()) {
			terms_.erase(it);
		}
	}

	bool is_zero() const { return terms_.empty(); }
	std::size_t size() const { return terms_.size(); }
	const map_type &terms() const { return terms_; }

	std::vector<OperatorTerm> term_list() const
	{
		std::vector<OperatorTerm> out;
		out.reserve(terms_.size());
		for (const auto &[k, c] : terms_) {
			out.push_back({c, k.grade, k.mono});
		}
		return out;
	}

	GaussianRational coefficient(const UnitGrade &g, const MonomialTail &t) const
	{
		auto it = terms_.find({g, t});
		return it == terms_.end() ? GaussianRational{} : it->second;
	}

	/// Keeps terms of order (in 1/c) at most `max_order`.
	OperatorPoly truncated(int max_order) const
	{
		OperatorPoly out;
		for (const auto &[k, c] : terms_) {
			if (k.grade.order() <= max_order) {
				out.terms_.emplace(k, c);
			}
		}
		return out;
	}

	/// Terms whose order in 1/c is exactly `order`.
	OperatorPoly at_order(int order) const
	{
		OperatorPoly out;
		for (const auto &[k, c] : terms_) {
			if (k.grade.order() == order) {
				out.terms_.emplace(k, c);
			}
		}
		return out;
	}

	OperatorPoly filtered(const std::function<bool(const TermKey &)> &keep) const
	{
		OperatorPoly out;
		for (const auto &[k, c] : terms_) {
			if (keep(k)) {
				out.terms_.emplace(k, c);
			}
		}
		return out;
	}

	std::optional<int> min_order() const
	{
		std::optional<int> o;
		for (const auto &[k, c] : terms_) {
			if (!o || k.grade.order() < *o) {
				o = k.grade.order();
			}
		}
		return o;
	}

	/// Multiplies every term by a constant and a unit monomial.
	OperatorPoly scaled(const GaussianRational &c, const UnitGrade &g = {}) const
	{
		OperatorPoly out;
		if (c.is_zero()) {
			return out;
		}
		for (const auto &[k, v] : terms_) {
			out.terms_.emplace(TermKey{k.grade + g, k.mono}, v * c);
		}
		return out;
	}

	OperatorPoly &operator+=(const OperatorPoly &o)
	{
		for (const auto &[k, c] : o.terms_) {
			add(c, k.grade, k.mono);
		}
		return *this;
	}
	OperatorPoly &operator-=(const OperatorPoly &o)
	{
		for (const auto &[k, c] : o.terms_) {
			add(-c, k.grade, k.mono);
		}
		return *this;
	}
	friend OperatorPoly operator+(OperatorPoly a, const OperatorPoly &b) { return a += b; }
	friend OperatorPoly operator-(OperatorPoly a, const OperatorPoly &b) { return a -= b; }
	friend OperatorPoly operator-(const OperatorPoly &a) { return a.scaled(-1); }
	friend bool operator==(const OperatorPoly &a, const OperatorPoly &b) { return a.terms_ == b.terms_; }
	friend bool operator!=(const OperatorPoly &a, const OperatorPoly &b) { return !(a == b); }

private:
	map_type terms_;
};

namespace detail
{

// Pauli decomposition of a tail: s + sigma.v with exactly one of the two
// present. Atoms carry their own pi^{2k}.
enum class Atom : std::uint8_t {
	S0,  // pi^{2k}
	SF,  // pi^{2k} (F.pi)
	VP,  // pi^{2k} pi
	VF,  // pi^{2k} F
	VPF, // pi^{2k} pi (F.pi)
	VX,  // pi^{2k} (F x pi)
};

struct Piece {
	Atom atom;
	Field f;
	int k;
	bool has_field() const { return atom == Atom::SF || atom == Atom::VF || atom == Atom::VPF || atom == Atom::VX; }
	bool is_vector() const { return atom != Atom::S0 && atom != Atom::SF; }
};

inline Piece decompose(const MonomialTail &t)
{
	switch (t.kind) {
		case TailKind::One: return {Atom::S0, Field::E, t.k};
		case TailKind::SigmaPi: return {Atom::VP, Field::E, t.k};
		case TailKind::FieldDot: return {Atom::SF, t.field, t.k};
		case TailKind::SigmaField: return {Atom::VF, t.field, t.k};
		case TailKind::SigmaPiFieldDot: return {Atom::VPF, t.field, t.k};
		case TailKind::CrossSigma: return {Atom::VX, t.field, t.k};
	}
	throw std::logic_error("decompose: bad tail");
}

inline MonomialTail recompose(const Piece &p)
{
	switch (p.atom) {
		case Atom::S0: return {TailKind::One, p.k};
		case Atom::SF: return {TailKind::FieldDot, p.k, p.f};
		case Atom::VP: return {TailKind::SigmaPi, p.k};
		case Atom::VF: return {TailKind::SigmaField, p.k, p.f};
		case Atom::VPF: return {TailKind::SigmaPiFieldDot, p.k, p.f};
		case Atom::VX: return {TailKind::CrossSigma, p.k, p.f};
	}
	throw std::logic_error("recompose: bad atom");
}

using Emit = std::function<void(const GaussianRational &, const Piece &)>;

// scalar * scalar
inline void ss(const Piece &a, const Piece &b, const Emit &emit)
{
	if (a.has_field() && b.has_field()) {
		return;
	}
	const int k = a.k + b.k;
	if (a.atom == Atom::S0 && b.atom == Atom::S0) {
		emit(1, {Atom::S0, Field::E, k});
	} else {
		emit(1, {Atom::SF, a.has_field() ? a.f : b.f, k});
	}
}

// scalar * vector
inline void sv(const Piece &s, const Piece &v, const Emit &emit)
{
	if (s.has_field() && v.has_field()) {
		return;
	}
	const int k = s.k + v.k;
	if (s.atom == Atom::S0) {
		emit(1, {v.atom, v.f, k});
		return;
	}
	// s = (F.pi), v = pi
	emit(1, {Atom::VPF, s.f, k});
}

// v1 . v2
inline void dot(const Piece &a, const Piece &b, const Emit &emit)
{
	if (a.has_field() && b.has_field()) {
		return;
	}
	const int k = a.k + b.k;
	if (a.atom == Atom::VP && b.atom == Atom::VP) {
		emit(1, {Atom::S0, Field::E, k + 1});
		return;
	}
	const Piece &fv = (a.atom == Atom::VP) ? b : a; // the field-carrying vector
	switch (fv.atom) {
		case Atom::VF: emit(1, {Atom::SF, fv.f, k}); break;
		case Atom::VPF: emit(1, {Atom::SF, fv.f, k + 1}); break;
		case Atom::VX: break; // pi.(F x pi) = 0
		default: throw std::logic_error("dot: unexpected atom");
	}
}

// v1 x v2
inline void cross(const Piece &a, const Piece &b, const Emit &emit)
{
	if (a.has_field() && b.has_field()) {
		return;
	}
	if (a.atom == Atom::VP && b.atom == Atom::VP) {
		return;
	}
	const int k = a.k + b.k;
	const bool pi_left = a.atom == Atom::VP;
	const Piece &fv = pi_left ? b : a;
	const GaussianRational s = pi_left ? GaussianRational(1) : GaussianRational(-1);
	switch (fv.atom) {
		case Atom::VF: // pi x F = -(F x pi)
			emit(-s, {Atom::VX, fv.f, k});
			break;
		case Atom::VPF: break; // pi x pi = 0 at this order
		case Atom::VX:         // pi x (F x pi) = F pi^2 - pi (F.pi)
			emit(s, {Atom::VF, fv.f, k + 1});
			emit(-s, {Atom::VPF, fv.f, k});
			break;
		default: throw std::logic_error("cross: unexpected atom");
	}
}

} // namespace detail

/// Product of two normal-form polynomials, truncated to field order 1 and,
/// when `max_order` is given, to order max_order in 1/c.
inline OperatorPoly mul(const OperatorPoly &a, const OperatorPoly &b, std::optional<int> max_order = std::nullopt)
{
	using namespace detail;
	OperatorPoly out;
	const GaussianRational I = GaussianRational::i();
	const UnitGrade eps = UnitGrade::eps();

	for (const auto &[ka, ca] : a.terms()) {
		for (const auto &[kb, cb] : b.terms()) {
			if (ka.mono.has_field() && kb.mono.has_field()) {
				continue;
			}
			const UnitGrade g = ka.grade + kb.grade;
			if (max_order && g.order() > *max_order) {
				continue;
			}
			const GaussianRational c = ca * cb;
			auto emit = [&](const GaussianRational &f, const Piece &p) { out.add(c * f, g, recompose(p)); };

			const Piece pa = decompose(ka.mono);
			const Piece pb = decompose(kb.mono);
			if (!pa.is_vector() && !pb.is_vector()) {
				ss(pa, pb, emit);
			} else if (!pa.is_vector()) {
				sv(pa, pb, emit);
			} else if (!pb.is_vector()) {
				sv(pb, pa, emit);
			} else {
				dot(pa, pb, emit);
				cross(pa, pb, [&](const GaussianRational &f, const Piece &p) { emit(I * f, p); });
			}

			// Non-commuting pi between field-free factors.
			if (ka.mono.kind != TailKind::SigmaPi || kb.mono.has_field()) {
				continue;
			}
			const UnitGrade ge = g + eps;
			if (max_order && ge.order() > *max_order) {
				continue;
			}
			const int k = ka.mono.k;
			const int l = kb.mono.k;
			if (kb.mono.kind == TailKind::SigmaPi) {
				out.add(-c, ge, {TailKind::SigmaField, k + l, Field::B});
				if (l >= 1) {
					out.add(c * GaussianRational(2 * l), ge, {TailKind::SigmaPiFieldDot, k + l - 1, Field::B});
					out.add(c * GaussianRational(-2 * l), ge, {TailKind::SigmaField, k + l, Field::B});
				}
			} else if (l >= 1) { // kb is One
				out.add(c * GaussianRational(0, -2 * l), ge, {TailKind::CrossSigma, k + l - 1, Field::B});
			}
		}
	}
	return out;
}

inline OperatorPoly power(const OperatorPoly &p, unsigned n, std::optional<int> max_order = std::nullopt)
{
	OperatorPoly r = OperatorPoly::one();
	for (unsigned i = 0; i < n; ++i) {
		r = mul(r, p, max_order);
	}
	return r;
}

/// [a, b] = ab - ba
inline OperatorPoly commutator(const OperatorPoly &a, const OperatorPoly &b, std::optional<int> max_order = std::nullopt)
{
	return mul(a, b, max_order) - mul(b, a, max_order);
}

/// {a, b} = ab + ba
inline OperatorPoly anticommutator(const OperatorPoly &a, const OperatorPoly &b,
                                   std::optional<int> max_order = std::nullopt)
{
	return mul(a, b, max_order) + mul(b, a, max_order);
}

/// [phi, p] for a homogeneous static E = -grad(phi):
///   [phi, pi^{2k}]        = -2k i hbar pi^{2k-2} (E.pi)
///   [phi, pi^{2k} (s.pi)] = -i hbar pi^{2k} (s.E) - 2k i hbar pi^{2k-2} (s.pi)(E.pi)
/// Field-carrying terms commute with phi at this order.
inline OperatorPoly commutator_phi(const OperatorPoly &p)
{
	OperatorPoly out;
	const UnitGrade h{0, 0, 1, 0, 0};
	for (const auto &[key, c] : p.terms()) {
		const int k = key.mono.k;
		const UnitGrade g = key.grade + h;
		switch (key.mono.kind) {
			case TailKind::One:
				if (k > 0) {
					out.add(c * GaussianRational(0, -2 * k), g, {TailKind::FieldDot, k - 1, Field::E});
				}
				break;
			case TailKind::SigmaPi:
				out.add(c * GaussianRational(0, -1), g, {TailKind::SigmaField, k, Field::E});
				if (k > 0) {
					out.add(c * GaussianRational(0, -2 * k), g, {TailKind::SigmaPiFieldDot, k - 1, Field::E});
				}
				break;
			default: break;
		}
	}
	return out;
}

/// Hermitian conjugate. All tails are self-adjoint except pi^{2k}(s.pi),
/// whose adjoint (s.pi) pi^{2k} is reordered back to normal form.
inline OperatorPoly dagger(const OperatorPoly &p)
{
	OperatorPoly out;
	for (const auto &[key, c] : p.terms()) {
		const GaussianRational cc = c.conj();
		out.add(cc, key.grade, key.mono);
		if (key.mono.kind == TailKind::SigmaPi && key.mono.k > 0) {
			const int k = key.mono.k;
			out.add(cc * GaussianRational(0, -2 * k), key.grade + UnitGrade::eps(),
			        {TailKind::CrossSigma, k - 1, Field::B});
		}
	}
	return out;
}

inline OperatorPoly hermitian_part(const OperatorPoly &p) { return (p + dagger(p)).scaled(BigRational(1, 2)); }
inline OperatorPoly antihermitian_part(const OperatorPoly &p) { return (p - dagger(p)).scaled(BigRational(1, 2)); }

/// Number of pi and sigma factors in a tail, mod 2.
inline int tail_parity(TailKind t)
{
	switch (t) {
		case TailKind::One:
		case TailKind::SigmaPi:
		case TailKind::CrossSigma: return 0;
		case TailKind::FieldDot:
		case TailKind::SigmaField:
		case TailKind::SigmaPiFieldDot: return 1;
	}
	return 0;
}

/// The formal replacement pi, sigma, q, mu', i -> -pi, -sigma, -q, -mu', -i
/// applied termwise (an antilinear automorphism of the algebra).
inline OperatorPoly charge_conjugate(const OperatorPoly &p)
{
	OperatorPoly out;
	for (const auto &[key, c] : p.terms()) {
		const int parity = tail_parity(key.mono.kind) + key.grade.q + key.grade.mu;
		const GaussianRational cc = c.conj();
		out.add((parity % 2 == 0) ? cc : -cc, key.grade, key.mono);
	}
	return out;
}

/// (s.pi)^n in normal form, from (s.pi)^2 = pi^2 - eps (s.B):
///   (s.pi)^{2j}   = pi^{2j} - j eps pi^{2j-2} (s.B)
///   (s.pi)^{2j+1} = pi^{2j} (s.pi) - j eps pi^{2j-2} [(B.pi) + i ((B x pi).s)]
inline OperatorPoly sigma_pi_power(unsigned n)
{
	const int j = static_cast<int>(n / 2);
	const UnitGrade eps = UnitGrade::eps();
	OperatorPoly out;
	if (n % 2 == 0) {
		out.add(1, {}, {TailKind::One, j});
		if (j > 0) {
			out.add(-j, eps, {TailKind::SigmaField, j - 1, Field::B});
		}
	} else {
		out.add(1, {}, {TailKind::SigmaPi, j});
		if (j > 0) {
			out.add(-j, eps, {TailKind::FieldDot, j - 1, Field::B});
			out.add(GaussianRational(0, -j), eps, {TailKind::CrossSigma, j - 1, Field::B});
		}
	}
	return out;
}

} // namespace kfw

#endif
