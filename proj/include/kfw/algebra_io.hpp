#ifndef KFW_ALGEBRA_IO_HPP
#define KFW_ALGEBRA_IO_HPP

#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "algebra.hpp"

namespace kfw
{

inline std::string tail_name(const MonomialTail &t)
{
	std::string f(to_string(t.field));
	switch (t.kind) {
		case TailKind::One: return "One";
		case TailKind::SigmaPi: return "SigmaPi";
		case TailKind::FieldDot: return "FieldDot(" + f + ")";
		case TailKind::SigmaField: return "SigmaField(" + f + ")";
		case TailKind::SigmaPiFieldDot: return "SigmaPiFieldDot(" + f + ")";
		case TailKind::CrossSigma: return "CrossSigma(" + f + ")";
	}
	throw std::logic_error("tail_name");
}

inline MonomialTail parse_tail(const std::string &name, int k)
{
	if (name == "One") {
		return {TailKind::One, k};
	}
	if (name == "SigmaPi") {
		return {TailKind::SigmaPi, k};
	}
	auto open = name.find('(');
	if (open == std::string::npos || name.size() != open + 3 || name[open + 2] != ')') {
		throw std::invalid_argument("unknown tail '" + name + "'");
	}
	Field f;
	switch (name[open + 1]) {
		case 'E': f = Field::E; break;
		case 'B': f = Field::B; break;
		default: throw std::invalid_argument("unknown field in tail '" + name + "'");
	}
	const std::string head = name.substr(0, open);
	if (head == "FieldDot") {
		return {TailKind::FieldDot, k, f};
	}
	if (head == "SigmaField") {
		return {TailKind::SigmaField, k, f};
	}
	if (head == "SigmaPiFieldDot") {
		return {TailKind::SigmaPiFieldDot, k, f};
	}
	if (head == "CrossSigma") {
		return {TailKind::CrossSigma, k, f};
	}
	throw std::invalid_argument("unknown tail '" + name + "'");
}

// e.g. "pi^2 (s.pi)", "((B x pi).s)", "1"
inline std::string render_tail(const MonomialTail &t)
{
	std::string f(to_string(t.field));
	std::string body;
	switch (t.kind) {
		case TailKind::One: break;
		case TailKind::SigmaPi: body = "(s.pi)"; break;
		case TailKind::FieldDot: body = "(" + f + ".pi)"; break;
		case TailKind::SigmaField: body = "(s." + f + ")"; break;
		case TailKind::SigmaPiFieldDot: body = "(s.pi)(" + f + ".pi)"; break;
		case TailKind::CrossSigma: body = "((" + f + " x pi).s)"; break;
	}
	std::string pre;
	if (t.k > 0) {
		pre = "pi^" + std::to_string(2 * t.k);
	}
	if (pre.empty() && body.empty()) {
		return "1";
	}
	if (pre.empty() || body.empty()) {
		return pre + body;
	}
	return pre + " " + body;
}

inline std::string render_grade(const UnitGrade &g)
{
	std::string out;
	auto sym = [&](const char *name, int p) {
		if (p == 0) {
			return;
		}
		out += ' ';
		out += name;
		if (p != 1) {
			out += '^' + std::to_string(p);
		}
	};
	sym("q", g.q);
	sym("hbar", g.hbar);
	sym("mu", g.mu);
	sym("m", g.m);
	sym("c", g.c);
	return out;
}

/// One term, e.g. "(-1/4) i q hbar m^-2 (s.E)".
inline std::string render_term(const GaussianRational &c, const UnitGrade &g, const MonomialTail &t)
{
	std::string out;
	if (c.is_real()) {
		out = "(" + c.re().get_str() + ")";
	} else if (c.is_imaginary()) {
		out = "(" + c.im().get_str() + ") i";
	} else {
		out = "(" + c.to_string() + ")";
	}
	out += render_grade(g);
	const std::string tail = render_tail(t);
	if (tail != "1" || (g == UnitGrade{})) {
		out += " " + tail;
	}
	return out;
}

inline std::string render(const OperatorPoly &p)
{
	if (p.is_zero()) {
		return "0";
	}
	std::string out;
	bool first = true;
	for (const auto &[k, c] : p.terms()) {
		if (!first) {
			out += " + ";
		}
		first = false;
		out += render_term(c, k.grade, k.mono);
	}
	return out;
}

inline nlohmann::json grade_to_json(const UnitGrade &g)
{
	return {{"m", g.m}, {"c", g.c}, {"hbar", g.hbar}, {"q", g.q}, {"mu", g.mu}};
}

inline UnitGrade grade_from_json(const nlohmann::json &j)
{
	UnitGrade g;
	g.m = j.value("m", 0);
	g.c = j.value("c", 0);
	g.hbar = j.value("hbar", 0);
	g.q = j.value("q", 0);
	g.mu = j.value("mu", 0);
	return g;
}

inline nlohmann::json to_json(const OperatorPoly &p)
{
	nlohmann::json arr = nlohmann::json::array();
	for (const auto &[k, c] : p.terms()) {
		arr.push_back({{"coeff_re", c.re().get_str()},
		               {"coeff_im", c.im().get_str()},
		               {"grade", grade_to_json(k.grade)},
		               {"tail", tail_name(k.mono)},
		               {"k", k.mono.k}});
	}
	return arr;
}

inline BigRational parse_rational(const std::string &s)
{
	BigRational r;
	if (s.empty() || r.set_str(s, 10) != 0 || r.get_den() == 0) {
		throw std::invalid_argument("bad rational '" + s + "'");
	}
	r.canonicalize();
	return r;
}

inline OperatorPoly poly_from_json(const nlohmann::json &arr)
{
	if (!arr.is_array()) {
		throw std::invalid_argument("polynomial must be a JSON array of terms");
	}
	OperatorPoly p;
	for (const auto &t : arr) {
		GaussianRational c(parse_rational(t.at("coeff_re").get<std::string>()),
		                   parse_rational(t.value("coeff_im", std::string("0"))));
		p.add(c, grade_from_json(t.at("grade")), parse_tail(t.at("tail").get<std::string>(), t.value("k", 0)));
	}
	return p;
}

} // namespace kfw

#endif
