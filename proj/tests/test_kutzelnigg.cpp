#include <gtest/gtest.h>

#include <kfw/kutzelnigg.hpp>

#include "oracles.hpp"
#include "print.hpp"

using namespace kfw;

namespace
{

const GaussianRational I = GaussianRational::i();

UnitGrade m_pow(int p) { return {p, 0, 0, 0, 0}; }
UnitGrade qh_m(int p) { return {p, 0, 1, 1, 0}; }
UnitGrade mu_m(int p) { return {p, 0, 0, 0, 1}; }

OperatorPoly tail(TailKind t, int k = 0, Field f = Field::E) { return OperatorPoly::term(1, {}, {t, k, f}); }

const SeriesTable &X31()
{
	static const SeriesTable t = dirac_series(31);
	return t;
}

const SeriesTable &Xp30()
{
	static const SeriesTable t = pauli_series(30, dirac_series(30));
	return t;
}

} // namespace

TEST(DiracSeries, X1)
{
	EXPECT_EQ(X31().entry(1), OperatorPoly::sigma_pi().scaled(BigRational(1, 2), m_pow(-1)));
}

TEST(DiracSeries, X3)
{
	// index form: the c^{-3} is stripped but the eps inside (s.pi)^3 keeps its 1/c
	const OperatorPoly expect = sigma_pi_power(3).scaled(BigRational(-1, 8), m_pow(-3)) +
	                            tail(TailKind::SigmaField).scaled(GaussianRational(0, BigRational(-1, 4)), qh_m(-2));
	EXPECT_EQ(X31().entry(3), expect);
}

TEST(DiracSeries, X13LeadingCoefficients)
{
	const OperatorPoly &x = X31().entry(13);
	EXPECT_EQ(x.coefficient(m_pow(-13), {TailKind::SigmaPi, 6}), GaussianRational(BigRational(33, 2048)));
	EXPECT_EQ(x.coefficient(qh_m(-12), {TailKind::SigmaField, 5, Field::E}), GaussianRational(0, BigRational(231, 2048)));
	EXPECT_EQ(x.coefficient(qh_m(-12), {TailKind::SigmaPiFieldDot, 4, Field::E}),
	          GaussianRational(0, BigRational(281, 1024)));
}

TEST(DiracSeries, EvenOrdersVanish)
{
	for (int n = 0; n <= 31; n += 2) {
		EXPECT_TRUE(X31().entry(n).is_zero()) << n;
	}
}

TEST(DiracSeries, RejectsNonPositiveOrder) { EXPECT_THROW(dirac_series(0), std::invalid_argument); }

TEST(DiracSeries, PrefixStable)
{
	const SeriesTable small = dirac_series(9);
	for (int n = 0; n <= 9; ++n) {
		EXPECT_EQ(small.entry(n), X31().entry(n)) << n;
	}
}

TEST(PauliSeries, LowOrders)
{
	EXPECT_TRUE(Xp30().entry(1).is_zero());
	EXPECT_TRUE(Xp30().entry(2).is_zero());
	EXPECT_EQ(Xp30().entry(3), tail(TailKind::SigmaField).scaled(GaussianRational(0, BigRational(-1, 2)), mu_m(-1)));
	EXPECT_EQ(Xp30().entry(4), tail(TailKind::FieldDot, 0, Field::B).scaled(BigRational(1, 2), mu_m(-2)));
	const OperatorPoly x5 = tail(TailKind::SigmaField, 1).scaled(GaussianRational(0, BigRational(3, 8)), mu_m(-3)) +
	                        tail(TailKind::SigmaPiFieldDot).scaled(GaussianRational(0, BigRational(-1, 4)), mu_m(-3));
	EXPECT_EQ(Xp30().entry(5), x5);
}

TEST(PauliSeries, X12)
{
	EXPECT_EQ(Xp30().entry(12), tail(TailKind::FieldDot, 4, Field::B).scaled(BigRational(63, 256), mu_m(-10)));
}

TEST(PauliSeries, RejectsLowOrder) { EXPECT_THROW(pauli_series(2), std::invalid_argument); }

TEST(PauliSeries, SumMatchesFullRecursion)
{
	const SeriesTable cal = calX_series(21);
	for (int n = 1; n <= 21; ++n) {
		EXPECT_EQ(cal.entry(n), X31().entry(n) + Xp30().entry(n)) << n;
	}
}

TEST(Theorems, T1AgainstOracleTo31)
{
	for (int n = 0; n <= 31; ++n) {
		EXPECT_EQ(X31().entry(n), oracle::theorem1(n)) << n;
		EXPECT_EQ(theorem_closed_form(Theorem::T1, n), oracle::theorem1(n)) << n;
	}
}

TEST(Theorems, T2AgainstOracleTo30)
{
	for (int n = 2; n <= 30; ++n) {
		EXPECT_EQ(Xp30().entry(n), oracle::theorem2(n)) << n;
		EXPECT_EQ(theorem_closed_form(Theorem::T2, n), oracle::theorem2(n)) << n;
	}
}

TEST(Theorems, Examples)
{
	EXPECT_EQ(theorem_closed_form(Theorem::T1, 5), X31().entry(5));
	EXPECT_TRUE(theorem_closed_form(Theorem::T1, 8).is_zero());
	EXPECT_EQ(theorem_closed_form(Theorem::T2, 7), Xp30().entry(7));
	EXPECT_THROW(theorem_closed_form(Theorem::T2, 1), std::invalid_argument);
	EXPECT_THROW(theorem_closed_form(Theorem::T1, -1), std::invalid_argument);
}

TEST(BinomialSeries, SquareOfSqrt)
{
	const OperatorPoly A = OperatorPoly::term(1, {-2, -2, 0, 0, 0}, {TailKind::One, 1}) +
	                       tail(TailKind::SigmaField, 0, Field::B).scaled(1, {-1, -2, 1, 1, 0});
	const OperatorPoly s = sqrt_series(A, 12);
	EXPECT_EQ(mul(s, s, 12), (OperatorPoly::one() + A).truncated(12));
	const OperatorPoly inv = binomial_series(A, -1, 12);
	EXPECT_EQ(mul(inv, OperatorPoly::one() + A, 12), OperatorPoly::one());
}

TEST(HFW, LeadingOrders)
{
	const FWHamiltonian H = assemble_HFW(6);
	EXPECT_EQ(H.phi_sign, 1);
	EXPECT_EQ(H.poly.coefficient({1, 2, 0, 0, 0}, {}), GaussianRational(1));
	EXPECT_EQ(H.poly.coefficient(m_pow(-1), {TailKind::One, 1}), GaussianRational(BigRational(1, 2)));
	EXPECT_EQ(H.poly.coefficient({-1, -1, 1, 1, 0}, {TailKind::SigmaField, 0, Field::B}),
	          GaussianRational(BigRational(-1, 2)));
	// -(1/8) pi^4 / (m^3 c^2): second term of sqrt(m^2c^4 + c^2 pi^2)
	EXPECT_EQ(H.poly.coefficient({-3, -2, 0, 0, 0}, {TailKind::One, 2}), GaussianRational(BigRational(-1, 8)));
}

TEST(HFW, AntihermitianPartVanishes)
{
	const FWHamiltonian H = assemble_HFW(30);
	EXPECT_TRUE(H.antihermitian().is_zero());
	EXPECT_TRUE(field_dot_family(H.poly, Field::E).is_zero());
	for (const auto &[n, p] : H.orders().entries) {
		EXPECT_TRUE(antihermitian_part(p).is_zero()) << n;
	}
}

TEST(HFW, ThreeRoutesAgree)
{
	const FWHamiltonian lemma = assemble_HFW(20);
	EXPECT_EQ(lemma.poly, assemble_HFW_direct(20).poly);
	EXPECT_EQ(lemma.poly, HFW_series_oracle(20).poly);
}

TEST(HFW, XdagXPurityAndCommutator)
{
	const int N = 16;
	const OperatorPoly xx = XdagX(N);
	for (const auto &[k, c] : xx.terms()) {
		const bool ok = k.mono.kind == TailKind::One ||
		                (k.mono.kind == TailKind::SigmaField && k.mono.field == Field::B) ||
		                (k.mono.kind == TailKind::CrossSigma && k.mono.field == Field::E);
		EXPECT_TRUE(ok) << render_term(c, k.grade, k.mono);
	}
	const OperatorPoly X = resum(X31(), N, N);
	const OperatorPoly cspX = mul(OperatorPoly::term(1, {0, 1, 0, 0, 0}, {TailKind::SigmaPi, 0}), X, N);
	EXPECT_TRUE(commutator(cspX, xx, N).is_zero());
}

TEST(HFW, RejectsLowOrder) { EXPECT_THROW(assemble_HFW(1), std::invalid_argument); }

TEST(CalHFW, LowestMagneticMomentTerm)
{
	const FWHamiltonian H = assemble_calHFW(8);
	// -mu'(s.B) with mu' = mu''/c
	EXPECT_EQ(H.poly.coefficient({0, -1, 0, 0, 1}, {TailKind::SigmaField, 0, Field::B}), GaussianRational(-1));
}

TEST(CalHFW, SigmaPiBPiFamily)
{
	const int N = 24;
	const FWHamiltonian H = assemble_calHFW(N);
	for (int j = 1; 2 * j + 1 <= N; ++j) {
		// -2 mu' b_j (-1)^j / (2mc)^{2j} pi^{2j-2} (s.pi)(B.pi)
		const BigRational expect = -2 * oracle::sgn(j) * oracle::b(j) / oracle::pow2(2 * j);
		EXPECT_EQ(H.poly.coefficient({-2 * j, -2 * j - 1, 0, 0, 1}, {TailKind::SigmaPiFieldDot, j - 1, Field::B}),
		          GaussianRational(expect))
		    << j;
	}
}

TEST(CalHFW, HermitianAndRoutesAgree)
{
	const FWHamiltonian H = assemble_calHFW(30);
	EXPECT_TRUE(H.antihermitian().is_zero());
	EXPECT_EQ(H.poly, calHFW_series_oracle(30).poly);
	EXPECT_EQ(assemble_calHFW(16).poly, assemble_calHFW_direct(16).poly);
	EXPECT_THROW(assemble_calHFW(2), std::invalid_argument);
}

TEST(CalHFW, DiracLimit)
{
	const int N = 14;
	const OperatorPoly noMu = assemble_calHFW(N).poly.filtered([](const TermKey &k) { return k.grade.mu == 0; });
	EXPECT_EQ(noMu, assemble_HFW(N).poly);
}

TEST(LowerBlock, ConjugationMatchesDirectAssembly)
{
	const int N = 20;
	const FWHamiltonian up = assemble_calHFW(N);
	const FWHamiltonian low = lower_block(up);
	EXPECT_EQ(low.poly, lower_block_direct(N).poly);
	EXPECT_EQ(low.phi_sign, lower_block_direct(N).phi_sign);
	EXPECT_EQ(lower_block(low).poly, up.poly);
}

TEST(LowerBlock, FreeSectorFlipsSign)
{
	const FWHamiltonian low = lower_block(assemble_calHFW(6));
	EXPECT_EQ(low.poly.coefficient({1, 2, 0, 0, 0}, {}), GaussianRational(-1));
	EXPECT_EQ(low.poly.coefficient(m_pow(-1), {TailKind::One, 1}), GaussianRational(BigRational(-1, 2)));
	EXPECT_TRUE(low.antihermitian().is_zero());
}
