#ifndef KFW_GOLDEN_HPP
#define KFW_GOLDEN_HPP

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "algebra_io.hpp"
#include "kutzelnigg.hpp"

// Reference tables of leading series terms, stored as data files.

namespace kfw
{

#ifndef KFW_GOLDEN_DIR
#define KFW_GOLDEN_DIR "data/golden"
#endif

/// KFW_GOLDEN_DIR from the environment, else the compiled-in location.
inline std::filesystem::path default_golden_dir()
{
	if (const char *env = std::getenv("KFW_GOLDEN_DIR"); env && *env) {
		return env;
	}
	return KFW_GOLDEN_DIR;
}

struct GoldenTable {
	std::string series;
	std::map<int, OperatorPoly> orders;
	/// order -> printed coefficient strings that were corrected on transcription
	std::map<int, std::vector<std::string>> printed_overrides;
};

namespace detail
{

// "(s.pi)^n", "(s.E)", "(s.pi)(E.pi)", "(B.pi)"
inline OperatorPoly golden_shape(const std::string &shape)
{
	if (shape.rfind("(s.pi)^", 0) == 0) {
		const int n = std::stoi(shape.substr(7));
		if (n < 0) {
			throw std::invalid_argument("golden: negative power in '" + shape + "'");
		}
		return sigma_pi_power(static_cast<unsigned>(n));
	}
	if (shape == "1") {
		return OperatorPoly::one();
	}
	if (shape == "(s.E)" || shape == "(s.B)") {
		return OperatorPoly::term(1, {}, {TailKind::SigmaField, 0, shape[3] == 'E' ? Field::E : Field::B});
	}
	if (shape == "(E.pi)" || shape == "(B.pi)") {
		return OperatorPoly::term(1, {}, {TailKind::FieldDot, 0, shape[1] == 'E' ? Field::E : Field::B});
	}
	if (shape == "(s.pi)(E.pi)" || shape == "(s.pi)(B.pi)") {
		return OperatorPoly::term(1, {}, {TailKind::SigmaPiFieldDot, 0, shape[7] == 'E' ? Field::E : Field::B});
	}
	throw std::invalid_argument("golden: unknown shape '" + shape + "'");
}

} // namespace detail

inline OperatorPoly golden_term(const nlohmann::json &t)
{
	const BigRational c = parse_rational(t.at("coeff").get<std::string>());
	const GaussianRational coeff = t.value("imag", false) ? GaussianRational(0, c) : GaussianRational(c);
	const UnitGrade g = grade_from_json(t.at("grade"));
	const int k = t.value("k", 0);
	if (k < 0) {
		throw std::invalid_argument("golden: negative k");
	}
	const OperatorPoly pik = OperatorPoly::term(1, {}, {TailKind::One, k});
	return mul(pik, detail::golden_shape(t.at("shape").get<std::string>())).scaled(coeff, g);
}

inline GoldenTable parse_golden(const nlohmann::json &doc)
{
	if (doc.value("schema", 0) != 1) {
		throw std::invalid_argument("golden: unsupported schema");
	}
	GoldenTable g;
	g.series = doc.at("series").get<std::string>();
	for (const auto &o : doc.at("orders")) {
		const int n = o.at("order").get<int>();
		OperatorPoly p;
		for (const auto &t : o.at("terms")) {
			p += golden_term(t);
			if (t.contains("printed")) {
				g.printed_overrides[n].push_back(t.at("printed").get<std::string>());
			}
		}
		g.orders[n] = std::move(p);
	}
	return g;
}

inline GoldenTable load_golden(const std::filesystem::path &file)
{
	std::ifstream in(file);
	if (!in) {
		throw std::runtime_error("cannot open golden file " + file.string());
	}
	return parse_golden(nlohmann::json::parse(in));
}

struct GoldenMismatch {
	int order;
	OperatorPoly expected;
	OperatorPoly actual;
};

/// Orders where the computed entry differs from the table.
inline std::vector<GoldenMismatch> compare_golden(const GoldenTable &g, const SeriesTable &s)
{
	std::vector<GoldenMismatch> out;
	for (const auto &[n, p] : g.orders) {
		if (s.entry(n) != p) {
			out.push_back({n, p, s.entry(n)});
		}
	}
	return out;
}

} // namespace kfw

#endif
