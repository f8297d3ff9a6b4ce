#ifndef KFW_CLI_HPP
#define KFW_CLI_HPP

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <toml.hpp>

#include "algebra_io.hpp"
#include "verify.hpp"

// Command-line front end. Exit codes: 0 all checks pass, 1 verification
// failure, 2 usage or configuration error.

namespace kfw::cli
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_fail = 1;
inline constexpr int exit_usage = 2;
inline constexpr int max_order_limit = 61;

struct UsageError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

// -- configuration ---------------------------------------------------------

class ConfigFile
{
public:
	ConfigFile() = default;
	explicit ConfigFile(const std::string &path)
	{
		try {
			table_ = toml::parse_file(path);
		} catch (const toml::parse_error &e) {
			std::ostringstream os;
			os << "config " << path << ": " << e.description() << " (line " << e.source().begin.line << ")";
			throw UsageError(os.str());
		}
	}

	/// Fills `var` from [section].key unless the flag was given explicitly.
	template <typename T>
	void apply(const std::string &section, const std::string &key, T &var, const CLI::Option *opt) const
	{
		if (opt && opt->count() > 0) {
			return;
		}
		const toml::node *n = table_.at_path(section + "." + key).node();
		if (!n) {
			return;
		}
		if constexpr (std::is_same_v<T, bool>) {
			auto v = n->value<bool>();
			if (!v) {
				throw UsageError("config: [" + section + "] " + key + " must be a boolean");
			}
			var = *v;
		} else if constexpr (std::is_integral_v<T>) {
			auto v = n->value<std::int64_t>();
			if (!v) {
				throw UsageError("config: [" + section + "] " + key + " must be an integer");
			}
			var = static_cast<T>(*v);
		} else if constexpr (std::is_floating_point_v<T>) {
			auto v = n->value<double>();
			if (!v) {
				throw UsageError("config: [" + section + "] " + key + " must be a number");
			}
			var = *v;
		} else if constexpr (std::is_same_v<T, std::string>) {
			auto v = n->value<std::string>();
			if (!v) {
				throw UsageError("config: [" + section + "] " + key + " must be a string");
			}
			var = *v;
		} else {
			const toml::array *arr = n->as_array();
			if (!arr) {
				throw UsageError("config: [" + section + "] " + key + " must be an array");
			}
			var.clear();
			for (const auto &el : *arr) {
				auto v = el.value<typename T::value_type>();
				if (!v) {
					throw UsageError("config: [" + section + "] " + key + " has a bad element");
				}
				var.push_back(*v);
			}
		}
	}

private:
	toml::table table_;
};

// -- shared option groups --------------------------------------------------

struct OutputOptions {
	std::string format;
	std::string output;
	CLI::Option *format_opt = nullptr;
	CLI::Option *output_opt = nullptr;

	void add(CLI::App *app, const std::string &default_format, std::vector<std::string> formats)
	{
		format = default_format;
		format_opt = app->add_option("--format", format, "Output format")->check(CLI::IsMember(formats));
		output_opt = app->add_option("-o,--output", output, "Write the report here (relative to $KFW_OUTPUT_DIR if set)");
	}
	void configure(const ConfigFile &cfg, const std::string &section)
	{
		cfg.apply(section, "format", format, format_opt);
		cfg.apply(section, "output", output, output_opt);
	}
};

struct ParamOptions {
	PhysicalParams p{1.0, 1.0, 1.0, 1.0, 0.3};
	std::vector<CLI::Option *> opts;

	void add(CLI::App *app)
	{
		opts.push_back(app->add_option("--m", p.m, "Mass"));
		opts.push_back(app->add_option("--c", p.c, "Speed of light"));
		opts.push_back(app->add_option("--q", p.q, "Charge"));
		opts.push_back(app->add_option("--hbar", p.hbar, "Reduced Planck constant"));
		opts.push_back(app->add_option("--mu-prime", p.mu_prime, "Anomalous magnetic moment"));
	}
	void configure(const ConfigFile &cfg)
	{
		cfg.apply("params", "m", p.m, opts[0]);
		cfg.apply("params", "c", p.c, opts[1]);
		cfg.apply("params", "q", p.q, opts[2]);
		cfg.apply("params", "hbar", p.hbar, opts[3]);
		cfg.apply("params", "mu_prime", p.mu_prime, opts[4]);
		try {
			p.validate();
		} catch (const std::invalid_argument &e) {
			throw UsageError(e.what());
		}
	}
};

inline std::filesystem::path resolve_output(const std::string &out)
{
	std::filesystem::path path(out);
	if (path.is_relative()) {
		if (const char *dir = std::getenv("KFW_OUTPUT_DIR"); dir && *dir) {
			path = std::filesystem::path(dir) / path;
		}
	}
	return path;
}

/// Writes to the output file, or to `out` when none is set. An unwritable
/// destination is a usage error.
inline void emit(const OutputOptions &o, const std::string &text, std::ostream &out)
{
	if (o.output.empty()) {
		out << text;
		return;
	}
	const auto path = resolve_output(o.output);
	std::ofstream f(path);
	if (!f || !(f << text) || !f.flush()) {
		throw UsageError("cannot write " + path.string());
	}
}

inline nlohmann::json report_header(const std::string &command)
{
	return {{"schema", 1}, {"command", command}};
}

inline nlohmann::json to_json(const CheckResult &c)
{
	return {{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}};
}

inline void check_order(int order, int lo, const std::string &what)
{
	if (order < lo || order > max_order_limit) {
		throw UsageError(what + " must be in [" + std::to_string(lo) + ", " + std::to_string(max_order_limit) + "]");
	}
}

// -- expand ----------------------------------------------------------------

struct ExpandCmd {
	std::string theory = "dirac";
	int order = 13;
	bool golden = false;
	std::string golden_dir;
	OutputOptions io;
	CLI::Option *o_theory, *o_order, *o_golden, *o_gdir;

	void add(CLI::App &root)
	{
		auto *app = root.add_subcommand("expand", "Print the series X_n or X'_n");
		o_theory = app->add_option("--theory", theory, "dirac or dirac-pauli")->check(CLI::IsMember({"dirac", "dirac-pauli"}));
		o_order = app->add_option("--order", order, "Highest order");
		o_golden = app->add_flag("--golden", golden, "Compare with the stored reference tables");
		o_gdir = app->add_option("--golden-dir", golden_dir, "Directory holding the reference tables");
		io.add(app, "json", {"json", "text"});
	}

	int run(const ConfigFile &cfg, std::ostream &out, std::ostream &err)
	{
		cfg.apply("expand", "theory", theory, o_theory);
		cfg.apply("expand", "order", order, o_order);
		cfg.apply("expand", "golden", golden, o_golden);
		cfg.apply("expand", "golden_dir", golden_dir, o_gdir);
		io.configure(cfg, "expand");
		const bool dirac = theory == "dirac";
		check_order(order, dirac ? 1 : 3, "--order");

		const SeriesTable x = dirac_series(std::max(order, 3));
		const SeriesTable s = dirac ? x : pauli_series(std::max(order, 3), x);

		nlohmann::json rep = report_header("expand");
		rep["theory"] = theory;
		rep["max_order"] = order;
		nlohmann::json orders = nlohmann::json::array();
		std::ostringstream text;
		for (int n = 1; n <= order; ++n) {
			const OperatorPoly &p = s.entry(n);
			if (p.is_zero()) {
				continue;
			}
			orders.push_back({{"order", n}, {"terms", kfw::to_json(p)}});
			text << (dirac ? "X_" : "X'_") << n << " = " << render(p) << '\n';
		}
		rep["orders"] = orders;

		bool pass = true;
		if (golden) {
			const auto dir = golden_dir.empty() ? default_golden_dir() : std::filesystem::path(golden_dir);
			CheckResult c;
			try {
				c = check_golden(dirac ? Theory::Dirac : Theory::DiracPauli, order, dir);
			} catch (const std::runtime_error &e) {
				throw UsageError(e.what());
			}
			pass = c.pass;
			rep["golden"] = to_json(c);
			text << "golden: " << (c.pass ? "PASS" : "FAIL") << " (" << c.detail << ")\n";
			if (!c.pass) {
				err << "golden mismatch: " << c.detail << '\n';
			}
		}
		rep["pass"] = pass;
		emit(io, io.format == "json" ? rep.dump(1) + "\n" : text.str(), out);
		return pass ? exit_ok : exit_fail;
	}
};

// -- verify ----------------------------------------------------------------

struct VerifyCmd {
	bool theorems = false, identities = false, hermiticity = false, lemmas = false;
	int order = 31;
	int jmax = 200;
	std::string inject;
	OutputOptions io;
	CLI::Option *o_th, *o_id, *o_he, *o_le, *o_order, *o_jmax, *o_inject;

	void add(CLI::App &root)
	{
		auto *app = root.add_subcommand("verify", "Theorems, identities, hermiticity and lemma checks");
		o_th = app->add_flag("--theorems", theorems, "Recursion against the closed forms of X_n and X'_n");
		o_id = app->add_flag("--identities", identities, "Combinatorial identities A-F");
		o_he = app->add_flag("--hermiticity", hermiticity, "Vanishing antihermitian parts");
		o_le = app->add_flag("--lemmas", lemmas, "Assembly routes and structural lemmas");
		o_order = app->add_option("--order", order, "Highest series order");
		o_jmax = app->add_option("--jmax", jmax, "Highest j for the identities");
		o_inject = app->add_option("--inject-fault", inject, "Testing: perturb one coefficient, KIND:J (e.g. C:5)")
		               ->group("Testing");
		io.add(app, "json", {"json", "text"});
	}

	static CoeffTable faulty_table(const std::string &spec, std::size_t size)
	{
		const auto colon = spec.find(':');
		if (colon == std::string::npos || colon == 0) {
			throw UsageError("--inject-fault expects KIND:J");
		}
		const std::string kind = spec.substr(0, colon);
		std::size_t j;
		try {
			j = std::stoul(spec.substr(colon + 1));
		} catch (const std::exception &) {
			throw UsageError("--inject-fault expects KIND:J");
		}
		CoeffKind k;
		if (kind == "A") {
			k = CoeffKind::A;
		} else if (kind == "B") {
			k = CoeffKind::B;
		} else if (kind == "C") {
			k = CoeffKind::C;
		} else if (kind == "D") {
			k = CoeffKind::D;
		} else {
			throw UsageError("--inject-fault: kind must be A, B, C or D");
		}
		CoeffTable t(size);
		if (j >= t.size()) {
			throw UsageError("--inject-fault: j out of range");
		}
		return t.with_override(k, j, t(k, j) + 1);
	}

	int run(const ConfigFile &cfg, std::ostream &out, std::ostream &err)
	{
		cfg.apply("verify", "theorems", theorems, o_th);
		cfg.apply("verify", "identities", identities, o_id);
		cfg.apply("verify", "hermiticity", hermiticity, o_he);
		cfg.apply("verify", "lemmas", lemmas, o_le);
		cfg.apply("verify", "order", order, o_order);
		cfg.apply("verify", "jmax", jmax, o_jmax);
		io.configure(cfg, "verify");
		check_order(order, 3, "--order");
		if (jmax < 1 || jmax > 100000) {
			throw UsageError("--jmax must be in [1, 100000]");
		}
		if (!theorems && !identities && !hermiticity && !lemmas) {
			theorems = identities = hermiticity = lemmas = true;
		}

		nlohmann::json rep = report_header("verify");
		rep["order"] = order;
		std::vector<CheckResult> checks;
		if (theorems) {
			checks.push_back(check_theorem(Theorem::T1, order));
			checks.push_back(check_theorem(Theorem::T2, order));
		}
		if (identities) {
			rep["jmax"] = jmax;
			const std::size_t size = static_cast<std::size_t>(jmax) + 2;
			const CoeffTable table = inject.empty() ? CoeffTable(size) : faulty_table(inject, size);
			IdentitySuite suite = check_identities(table, static_cast<std::size_t>(jmax));
			checks.push_back(suite.summary);
			nlohmann::json ids = nlohmann::json::array();
			for (const auto &r : suite.reports) {
				nlohmann::json one = {{"identity", std::string(to_string(r.identity))}, {"pass", r.pass()},
				                      {"checked", r.records.size()}};
				if (const auto *f = r.first_failure()) {
					one["first_failure"] = {{"identity", std::string(to_string(f->identity))},
					                        {"j", f->j},
					                        {"lhs", f->lhs.get_str()},
					                        {"rhs", f->rhs.get_str()},
					                        {"pass", false}};
				}
				ids.push_back(one);
			}
			rep["identities"] = ids;
		}
		if (hermiticity) {
			checks.push_back(check_hermiticity(std::min(order, 60)));
		}
		if (lemmas) {
			for (auto &c : check_lemmas(std::min(order, 60))) {
				checks.push_back(std::move(c));
			}
		}
		bool pass = true;
		nlohmann::json arr = nlohmann::json::array();
		std::ostringstream text;
		for (const auto &c : checks) {
			pass = pass && c.pass;
			arr.push_back(to_json(c));
			text << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
			if (!c.pass) {
				err << "FAIL " << c.name << ": " << c.detail << '\n';
			}
		}
		rep["checks"] = arr;
		rep["pass"] = pass;
		emit(io, io.format == "json" ? rep.dump(1) + "\n" : text.str(), out);
		return pass ? exit_ok : exit_fail;
	}
};

// -- special-case ----------------------------------------------------------

struct SpecialCaseCmd {
	std::string which;
	int trials = 100;
	std::uint64_t seed = 7;
	int order = 30;
	bool singular_omega = false;
	double tol_offdiag = 1e-10, tol_block = 1e-10, tol_unitarity = 1e-12;
	ParamOptions params;
	OutputOptions io;
	CLI::Option *o_case, *o_trials, *o_seed, *o_order, *o_sing, *o_toff, *o_tblk, *o_tuni;

	void add(CLI::App &root)
	{
		auto *app = root.add_subcommand("special-case", "Exactly solvable cases and charge conjugation");
		o_case = app->add_option("case", which, "1, 2, massless or conjugation")
		             ->check(CLI::IsMember({"1", "2", "massless", "conjugation"}));
		o_trials = app->add_option("--trials", trials, "Random trials");
		o_seed = app->add_option("--seed", seed, "Random seed");
		o_order = app->add_option("--order", order, "Series order for the conjugation check");
		o_sing = app->add_flag("--singular-omega", singular_omega, "Case 2 at a point where Omega is singular");
		o_toff = app->add_option("--tol-offdiag", tol_offdiag, "Relative off-diagonal tolerance");
		o_tblk = app->add_option("--tol-block", tol_block, "Relative block tolerance");
		o_tuni = app->add_option("--tol-unitarity", tol_unitarity, "Unitarity tolerance");
		params.add(app);
		io.add(app, "json", {"json", "text"});
	}

	int run(const ConfigFile &cfg, std::ostream &out, std::ostream &err)
	{
		const std::string sec = "special-case";
		cfg.apply(sec, "case", which, o_case);
		cfg.apply(sec, "trials", trials, o_trials);
		cfg.apply(sec, "seed", seed, o_seed);
		cfg.apply(sec, "order", order, o_order);
		cfg.apply(sec, "singular_omega", singular_omega, o_sing);
		cfg.apply(sec, "tol_offdiag", tol_offdiag, o_toff);
		cfg.apply(sec, "tol_block", tol_block, o_tblk);
		cfg.apply(sec, "tol_unitarity", tol_unitarity, o_tuni);
		params.configure(cfg);
		io.configure(cfg, sec);
		if (which.empty()) {
			throw UsageError("special-case: missing case (1, 2, massless or conjugation)");
		}
		if (which != "1" && which != "2" && which != "massless" && which != "conjugation") {
			throw UsageError("special-case: unknown case " + which);
		}
		if (trials < 1) {
			throw UsageError("--trials must be positive");
		}
		if (!(tol_offdiag > 0) || !(tol_block > 0) || !(tol_unitarity > 0)) {
			throw UsageError("tolerances must be positive");
		}
		check_order(order, 3, "--order");

		nlohmann::json rep = report_header("special-case");
		rep["case"] = which;
		std::ostringstream text;
		bool pass = true;
		const PhysicalParams &p = params.p;

		if (which == "massless") {
			CMat4 U;
			const CheckResult c = check_massless(&U);
			pass = c.pass;
			nlohmann::json rows = nlohmann::json::array();
			text << "U =\n";
			for (int i = 0; i < 4; ++i) {
				nlohmann::json row = nlohmann::json::array();
				for (int j = 0; j < 4; ++j) {
					const double v = std::abs(U(i, j).real()) < 1e-15 ? 0.0 : U(i, j).real();
					row.push_back(v);
					text << (j ? " " : "  ") << std::showpos << std::fixed << std::setprecision(6) << v
					     << std::noshowpos;
				}
				rows.push_back(row);
				text << '\n';
			}
			text << "U = (1/sqrt2)[[1,1],[-1,1]]: " << (c.pass ? "PASS" : "FAIL") << " (" << c.detail << ")\n";
			rep["U_real"] = rows;
			rep["check"] = to_json(c);
		} else if (which == "conjugation") {
			ConjugationSummary s = run_conjugation(p, order, trials, seed);
			s.tol = tol_block;
			pass = s.pass();
			rep["trials"] = trials;
			rep["seed"] = seed;
			rep["symbolic_exact"] = s.symbolic;
			rep["residuals"] = {{"series", s.max_series}, {"closed_form", s.max_closed}, {"exact_cases", s.max_exact}};
			rep["tolerance"] = s.tol;
			text << "symbolic: " << (s.symbolic ? "exact" : "MISMATCH") << "\nmax residual series "
			     << s.max_series << ", closed form " << s.max_closed << ", exact cases " << s.max_exact << '\n';
		} else if (which == "2" && singular_omega) {
			PhysicalParams q = p;
			if (q.mu_prime == 0) {
				q.mu_prime = 0.3;
			}
			const Vec3 mom(std::abs(q.mu_prime) / q.c, 0, 0); // c|p| = |mu'||E| with |E| = 1, p perpendicular to E
			const Vec3 E(0, 1, 0);
			try {
				solve_case2(q, mom, E);
				rep["diagnostic"] = "Omega unexpectedly invertible";
			} catch (const SingularOmega &e) {
				rep["diagnostic"] = e.what();
				err << e.what() << '\n';
				text << e.what() << '\n';
			}
			pass = false;
		} else {
			ResidualSummary s = which == "1" ? run_case1(p, trials, seed) : run_case2(p, trials, seed);
			s.tol_offdiag = tol_offdiag;
			s.tol_block = tol_block;
			s.tol_unitarity = tol_unitarity;
			pass = s.pass();
			rep["trials"] = trials;
			rep["seed"] = seed;
			rep["residuals"] = {{"max_offdiag_rel", s.max_offdiag_rel},
			                    {"max_block_rel", s.max_block_rel},
			                    {"max_unitarity", s.max_unitarity}};
			rep["tolerances"] = {{"offdiag_rel", s.tol_offdiag}, {"block_rel", s.tol_block}, {"unitarity", s.tol_unitarity}};
			text << "case " << which << ", " << trials << " trials: max offdiag " << s.max_offdiag_rel << ", max block "
			     << s.max_block_rel << ", max unitarity " << s.max_unitarity << '\n';
		}
		rep["pass"] = pass;
		text << (pass ? "PASS" : "FAIL") << '\n';
		emit(io, io.format == "json" ? rep.dump(1) + "\n" : text.str(), out);
		return pass ? exit_ok : exit_fail;
	}
};

// -- sweep -----------------------------------------------------------------

struct SweepCmd {
	double lo = 0.0, hi = 1.2, step = 0.05;
	std::vector<double> grid;
	std::vector<int> orders{10, 20, 30};
	std::vector<double> E{0.01, -0.02, 0.015}, B{-0.01, 0.02, 0.005};
	bool classical = false;
	double tolerance = 1e-9;
	ParamOptions params;
	OutputOptions io;
	CLI::Option *o_lo, *o_hi, *o_step, *o_grid, *o_orders, *o_E, *o_B, *o_cl, *o_tol;

	void add(CLI::App &root)
	{
		auto *app = root.add_subcommand("sweep", "Series against closed forms and the classical Hamiltonian over |pi|/mc");
		o_lo = app->add_option("--min", lo, "Smallest |pi|/mc");
		o_hi = app->add_option("--max", hi, "Largest |pi|/mc");
		o_step = app->add_option("--step", step, "Grid step");
		o_grid = app->add_option("--grid", grid, "Explicit grid (overrides min/max/step)")->delimiter(',');
		o_orders = app->add_option("--orders", orders, "Series orders to compare")->delimiter(',');
		o_E = app->add_option("--E", E, "Electric field x,y,z")->delimiter(',')->expected(3);
		o_B = app->add_option("--B", B, "Magnetic field x,y,z")->delimiter(',')->expected(3);
		o_cl = app->add_flag("--classical-compare", classical, "Fail unless eigenvalues match the classical H");
		o_tol = app->add_option("--tolerance", tolerance, "Tolerance for --classical-compare");
		params.add(app);
		io.add(app, "csv", {"csv", "json"});
	}

	std::vector<double> build_grid() const
	{
		if (o_grid && o_grid->count() > 0) {
			std::vector<double> g;
			for (const auto &r : o_grid->results()) {
				if (r.empty()) {
					continue;
				}
				g.push_back(std::stod(r));
			}
			return g;
		}
		if (!grid.empty()) {
			return grid;
		}
		std::vector<double> g;
		if (!(step > 0) || hi < lo) {
			return g;
		}
		const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
		for (int i = 0; i <= n; ++i) {
			g.push_back(lo + i * step);
		}
		return g;
	}

	int run(const ConfigFile &cfg, std::ostream &out, std::ostream &err)
	{
		cfg.apply("sweep", "min", lo, o_lo);
		cfg.apply("sweep", "max", hi, o_hi);
		cfg.apply("sweep", "step", step, o_step);
		cfg.apply("sweep", "grid", grid, o_grid);
		cfg.apply("sweep", "orders", orders, o_orders);
		cfg.apply("sweep", "E", E, o_E);
		cfg.apply("sweep", "B", B, o_B);
		cfg.apply("sweep", "classical_compare", classical, o_cl);
		cfg.apply("sweep", "tolerance", tolerance, o_tol);
		params.configure(cfg);
		io.configure(cfg, "sweep");
		if (params.p.m <= 0) {
			throw UsageError("sweep requires m > 0");
		}
		SweepSpec spec;
		spec.pi_over_mc = build_grid();
		if (spec.pi_over_mc.empty()) {
			throw UsageError("sweep: empty grid");
		}
		for (double r : spec.pi_over_mc) {
			if (!(r >= 0) || !std::isfinite(r)) {
				throw UsageError("sweep: grid values must be finite and >= 0");
			}
		}
		if (orders.empty()) {
			throw UsageError("sweep: no orders");
		}
		for (int o : orders) {
			check_order(o, 3, "--orders entries");
		}
		if (E.size() != 3 || B.size() != 3) {
			throw UsageError("--E and --B take three components");
		}
		if (!(tolerance > 0)) {
			throw UsageError("--tolerance must be positive");
		}
		spec.orders = orders;
		spec.E = Vec3(E[0], E[1], E[2]);
		spec.B = Vec3(B[0], B[1], B[2]);
		const SweepTable t = series_vs_closed_sweep(params.p, spec);

		bool pass = true;
		if (classical) {
			for (std::size_t i = 0; i < t.rows.size(); ++i) {
				if (t.column(i, "within_radius") > 0 && t.column(i, "abs_diff") > tolerance) {
					pass = false;
					err << "classical mismatch at |pi|/mc = " << t.column(i, "pi_over_mc") << '\n';
				}
			}
		}
		if (io.format == "csv") {
			emit(io, t.to_csv(), out);
		} else {
			nlohmann::json rep = report_header("sweep");
			rep["columns"] = t.columns;
			rep["rows"] = t.rows;
			rep["pass"] = pass;
			emit(io, rep.dump(1) + "\n", out);
		}
		return pass ? exit_ok : exit_fail;
	}
};

// -- report ----------------------------------------------------------------

struct ReportCmd {
	int order = 30;
	std::uint64_t seed = 7;
	OutputOptions io;
	CLI::Option *o_order, *o_seed;

	void add(CLI::App &root)
	{
		auto *app = root.add_subcommand("report", "Run every check at default settings and summarize");
		o_order = app->add_option("--order", order, "Series order");
		o_seed = app->add_option("--seed", seed, "Random seed");
		io.add(app, "json", {"json", "text"});
	}

	int run(const ConfigFile &cfg, std::ostream &out, std::ostream &err)
	{
		cfg.apply("report", "order", order, o_order);
		cfg.apply("report", "seed", seed, o_seed);
		io.configure(cfg, "report");
		check_order(order, 3, "--order");
		PhysicalParams p{1.0, 1.0, 1.0, 1.0, 0.3};

		std::vector<CheckResult> checks;
		try {
			checks.push_back(check_golden(Theory::Dirac, 13));
			checks.push_back(check_golden(Theory::DiracPauli, 12));
		} catch (const std::runtime_error &e) {
			throw UsageError(e.what());
		}
		checks.push_back(check_theorem(Theorem::T1, order + 1));
		checks.push_back(check_theorem(Theorem::T2, order));
		checks.push_back(check_identities(CoeffTable(202), 200).summary);
		checks.push_back(check_hermiticity(order));
		for (auto &c : check_lemmas(order)) {
			checks.push_back(std::move(c));
		}
		auto residual_check = [](const ResidualSummary &s) {
			std::ostringstream os;
			os << "offdiag " << s.max_offdiag_rel << ", block " << s.max_block_rel << ", unitarity " << s.max_unitarity;
			return CheckResult{s.name, s.pass(), os.str()};
		};
		checks.push_back(residual_check(run_case1(p, 100, seed)));
		checks.push_back(residual_check(run_case2(p, 100, seed)));
		checks.push_back(check_massless());
		{
			const auto s = run_conjugation(p, order, 50, seed);
			std::ostringstream os;
			os << "series " << s.max_series << ", closed " << s.max_closed << ", exact " << s.max_exact;
			checks.push_back({"conjugation", s.pass(), os.str()});
		}
		{
			const auto s = run_classical(p, 500, seed);
			std::ostringstream os;
			os << s.samples << " samples, max relative difference " << s.max_rel;
			checks.push_back({"classical_correspondence", s.pass(), os.str()});
		}
		{
			const auto s = run_gaussian(20, seed);
			std::ostringstream os;
			os << s.samples << " matrices, max error " << s.max_err;
			checks.push_back({"gaussian_invsqrt", s.pass(), os.str()});
		}
		{
			const auto pts = resummation_errors(p, {0.2, 0.4, 0.6}, {order}, false);
			double worst = 0;
			for (const auto &pt : pts) {
				worst = std::max(worst, pt.rel_err);
			}
			std::ostringstream os;
			os << "max relative error at order " << order << ": " << worst;
			checks.push_back({"resummation", worst <= 1e-9, os.str()});
		}

		const ConjectureReport conj = conjectured_inhomogeneous_form(p, FieldPoint{}, 1.0);
		bool pass = true;
		nlohmann::json arr = nlohmann::json::array();
		std::ostringstream text;
		for (const auto &c : checks) {
			pass = pass && c.pass;
			arr.push_back(to_json(c));
			text << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
			if (!c.pass) {
				err << "FAIL " << c.name << ": " << c.detail << '\n';
			}
		}
		text << "darwin term (" << conj.label << ") at divE = 1: " << conj.darwin_term << '\n';
		nlohmann::json rep = report_header("report");
		rep["checks"] = arr;
		rep["conjecture"] = {{"label", conj.label}, {"darwin_term_at_divE_1", conj.darwin_term}};
		rep["pass"] = pass;
		emit(io, io.format == "json" ? rep.dump(1) + "\n" : text.str(), out);
		return pass ? exit_ok : exit_fail;
	}
};

/// Entry point shared by the executable and the tests.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
	CLI::App app{"Foldy-Wouthuysen series engine: expansion, verification and special cases", "kfw"};
	app.require_subcommand(1);
	std::string config_path;
	app.add_option("--config", config_path, "TOML configuration file (flags override it)");
	ExpandCmd expand;
	VerifyCmd verify;
	SpecialCaseCmd special;
	SweepCmd sweep;
	ReportCmd report;
	expand.add(app);
	verify.add(app);
	special.add(app);
	sweep.add(app);
	report.add(app);

	std::vector<std::string> rev(args.rbegin(), args.rend());
	try {
		app.parse(rev);
	} catch (const CLI::CallForHelp &) {
		out << app.help();
		return exit_ok;
	} catch (const CLI::CallForAllHelp &) {
		out << app.help("", CLI::AppFormatMode::All);
		return exit_ok;
	} catch (const CLI::ParseError &e) {
		err << e.what() << '\n';
		return exit_usage;
	}

	try {
		ConfigFile cfg = config_path.empty() ? ConfigFile{} : ConfigFile(config_path);
		const std::string name = app.get_subcommands().front()->get_name();
		if (name == "expand") {
			return expand.run(cfg, out, err);
		}
		if (name == "verify") {
			return verify.run(cfg, out, err);
		}
		if (name == "special-case") {
			return special.run(cfg, out, err);
		}
		if (name == "sweep") {
			return sweep.run(cfg, out, err);
		}
		return report.run(cfg, out, err);
	} catch (const UsageError &e) {
		err << "error: " << e.what() << '\n';
		return exit_usage;
	} catch (const std::invalid_argument &e) {
		err << "error: " << e.what() << '\n';
		return exit_usage;
	}
}

inline int run(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr)
{
	return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

} // namespace kfw::cli

#endif
