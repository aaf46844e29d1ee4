#include "osc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "osc/constant.hpp"
#include "osc/contour.hpp"
#include "osc/error.hpp"
#include "osc/oscsum.hpp"
#include "osc/partition.hpp"
#include "osc/primes.hpp"
#include "osc/pte.hpp"

namespace osc::cli {

namespace {

using json = nlohmann::ordered_json;

const std::vector<std::string> kCommands = {"pnt-verify", "osc-sum",   "bound",         "psi-sum",
                                            "psi-half",   "pte-construct", "pte-verify", "frm-degree",
                                            "lemma-sum",  "contour-check", "exponent-fit", "pigeonhole"};

struct Globals {
  std::string bits = "auto";
  std::string format = "json";
  std::string out;
  std::string sieve_cache;
  std::uint64_t seed = 1;
  std::string config;
};

json dec(const Real& value) { return value.to_string(); }

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<json> row) { rows_.push_back(std::move(row)); }
  std::size_t size() const { return rows_.size(); }

  void write(std::ostream& out, const std::string& format) const {
    if (format == "csv") {
      write_csv_row(out, columns_);
      for (const auto& row : rows_) {
        std::vector<std::string> cells;
        for (const json& cell : row) cells.push_back(csv_cell(cell));
        write_csv_row(out, cells);
      }
      return;
    }
    json doc = json::array();
    for (const auto& row : rows_) {
      json obj = json::object();
      for (std::size_t i = 0; i < columns_.size(); ++i) obj[columns_[i]] = row[i];
      doc.push_back(std::move(obj));
    }
    out << doc.dump(2) << "\n";
  }

 private:
  static std::string csv_cell(const json& cell) {
    if (cell.is_null()) return "";
    if (cell.is_string()) return cell.get<std::string>();
    if (cell.is_array()) {
      std::string joined;
      for (const json& item : cell) {
        if (!joined.empty()) joined += ';';
        joined += csv_cell(item);
      }
      return joined;
    }
    return cell.dump();
  }

  static void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out << ',';
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\n") != std::string::npos) {
        out << '"';
        for (char ch : c) out << (ch == '"' ? "\"\"" : std::string(1, ch));
        out << '"';
      } else {
        out << c;
      }
    }
    out << '\n';
  }

  std::vector<std::string> columns_;
  std::vector<std::vector<json>> rows_;
};

PrecisionContext resolve_bits(const Globals& g, double span, double growth, Bits floor = 128) {
  if (g.bits == "auto") return PrecisionContext(std::max(floor, required_bits(std::max(span, 0.0), growth)));
  Bits bits = 0;
  try {
    std::size_t used = 0;
    bits = std::stol(g.bits, &used);
    if (used != g.bits.size()) throw std::invalid_argument(g.bits);
  } catch (const std::logic_error&) {
    fail(ErrorKind::invalid_parameters, "--bits must be an integer or 'auto', got '" + g.bits + "'");
  }
  return PrecisionContext(bits);
}

long to_long(const mpq_class& v, const char* what) {
  if (v.get_den() != 1 || !v.get_num().fits_slong_p()) {
    fail(ErrorKind::invalid_parameters, std::string(what) + " must be an integer");
  }
  return v.get_num().get_si();
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

KernelSpec parse_kernel(const std::string& text, const std::string& weight) {
  const std::vector<std::string> parts = split(text, ':');
  const std::string& name = parts.empty() ? text : parts[0];
  auto arg = [&](std::size_t i, const char* fallback) { return parts.size() > i ? parts[i] : std::string(fallback); };
  KernelSpec spec;
  using kernel::RademacherTerm;
  if (name == "exp_sqrt") {
    spec.family = kernel::ExpSqrt{Constant::parse(arg(1, "1"))};
  } else if (name == "p1" || name == "p2" || name == "p3" || name == "p4" || name == "sqrt_p1") {
    const std::map<std::string, RademacherTerm> terms = {{"p1", RademacherTerm::p1},
                                                         {"p2", RademacherTerm::p2},
                                                         {"p3", RademacherTerm::p3},
                                                         {"p4", RademacherTerm::p4},
                                                         {"sqrt_p1", RademacherTerm::sqrt_p1}};
    spec.family = kernel::Rademacher{terms.at(name)};
  } else if (name == "bessel") {
    spec.family = kernel::Bessel{static_cast<int>(to_long(parse_rational(arg(1, "0")), "bessel order")),
                                 Constant::parse(arg(2, "1"))};
  } else if (name == "power") {
    spec.family = kernel::Power{parse_rational(arg(1, "0"))};
  } else if (name == "complex_exp") {
    spec.family = kernel::ComplexExp{Constant::parse(arg(1, "1")), Constant::parse(arg(2, "0"))};
  } else if (name == "distinct") {
    spec.family = kernel::DistinctParts{};
  } else if (name == "mod5") {
    kernel::Mod5 k;
    k.a = static_cast<int>(to_long(parse_rational(arg(1, "1")), "mod5 residue"));
    k.constants.shift = parse_rational(arg(2, "1"));
    k.constants.scale = parse_rational(arg(3, "1"));
    spec.family = k;
  } else if (name == "meinardus") {
    spec.family = kernel::Meinardus{};
  } else {
    fail(ErrorKind::invalid_parameters, "unknown kernel '" + text + "'");
  }
  if (!weight.empty()) {
    const std::vector<std::string> w = split(weight, ',');
    if (w.size() != 3) fail(ErrorKind::invalid_parameters, "--weight expects alpha,beta,t");
    spec.weight = Weight{parse_rational(w[0]), parse_rational(w[1]), parse_rational(w[2])};
  }
  spec.validate();
  return spec;
}

struct FormOptions {
  std::string preset;
  std::string a = "1";
  std::string b = "0";
  std::string d = "0";

  void attach(CLI::App* sub) {
    sub->add_option("--q", preset, "Index form preset: squares | pentagonal");
    sub->add_option("--a", a, "q(n) = a n^2 + b n + d");
    sub->add_option("--b", b);
    sub->add_option("--d", d);
  }

  QuadraticForm form() const {
    if (preset == "squares") return QuadraticForm::squares();
    if (preset == "pentagonal") return QuadraticForm::pentagonal();
    if (!preset.empty()) fail(ErrorKind::invalid_parameters, "unknown --q preset '" + preset + "'");
    return QuadraticForm(parse_rational(a), parse_rational(b), parse_rational(d));
  }
};

struct Output {
  const Globals& globals;
  std::ostream& fallback;

  void emit(const Table& table) const {
    if (globals.out.empty()) {
      table.write(fallback, globals.format);
      return;
    }
    std::ofstream file(globals.out, std::ios::trunc);
    if (!file) fail(ErrorKind::io, "cannot open " + globals.out + " for writing");
    table.write(file, globals.format);
  }
};

LambdaSieve make_sieve(const Globals& g, std::uint64_t limit) {
  if (!g.sieve_cache.empty()) return LambdaSieve::cached(limit, g.sieve_cache);
  return LambdaSieve(limit);
}

std::uint64_t sieve_limit_for(const mpq_class& x_max) {
  return static_cast<std::uint64_t>(std::floor(std::exp(std::sqrt(x_max.get_d())))) + 2;
}

json optional_dec(const std::optional<Real>& v) { return v ? dec(*v) : json(nullptr); }

// ---- subcommands -------------------------------------------------------

struct PntOpts {
  long x_max = 2000;
  long corrupt = -1;
};

int cmd_pnt_verify(const Globals&, const PntOpts& o, const Output& out) {
  if (o.x_max < 1) fail(ErrorKind::invalid_parameters, "--x-max must be >= 1");
  ExactPartitionTable& table = ExactPartitionTable::shared();
  table.ensure(o.x_max);
  std::vector<mpz_class> values = table.snapshot();
  values.resize(static_cast<std::size_t>(o.x_max) + 1);
  if (o.corrupt >= 0) {
    if (o.corrupt > o.x_max) fail(ErrorKind::invalid_parameters, "--corrupt index beyond --x-max");
    values[static_cast<std::size_t>(o.corrupt)] += 1;
  }
  long failures = 0;
  json first = nullptr;
  for (long x = 1; x <= o.x_max; ++x) {
    const mpz_class s = pnt_checksum(x, values);
    if (s != 0) {
      if (failures == 0) first = x;
      ++failures;
    }
  }
  Table t({"x_max", "failures", "first_failure"});
  t.add({o.x_max, failures, first});
  out.emit(t);
  return failures == 0 ? kOk : kAssertionFailed;
}

struct SumOpts {
  std::string kernel = "p2";
  std::string weight;
  std::string x = "1000";
  FormOptions form;
};

int cmd_osc_sum(const Globals& g, const SumOpts& o, const Output& out) {
  const KernelSpec spec = parse_kernel(o.kernel, o.weight);
  const QuadraticForm q = o.form.form();
  Table t({"x", "re", "im", "abs", "terms", "bound", "ratio", "bits"});
  for (const mpq_class& x : parse_grid(o.x)) {
    const PrecisionContext ctx = resolve_bits(g, mpq_class(x - q.minimum()).get_d(), spec.growth());
    const SumReport r = alternating_sum(spec, q, x, ctx);
    t.add({to_string(x), dec(r.value.re), dec(r.value.im), dec(r.abs_value), r.term_count,
           optional_dec(r.predicted_bound), optional_dec(r.ratio), r.precision_bits});
  }
  out.emit(t);
  return kOk;
}

struct BoundOpts {
  std::string kind = "main1";
  std::string a = "1";
  std::string c = "1";
  std::string alpha = "1";
  std::string beta = "0";
  std::string T = "10000";
  double delta = 0.05;
  std::string x = "100";
};

int cmd_bound(const Globals& g, const BoundOpts& o, const Output& out) {
  const std::vector<mpq_class> grid = parse_grid(o.x);
  if (o.kind == "main1") {
    const mpq_class a = parse_rational(o.a);
    const Constant c = Constant::parse(o.c);
    const DeltaMaximum best = maximize_delta(a.get_d(), c.to_double());
    Table t({"x", "alpha_star", "w", "bound"});
    for (const mpq_class& x : grid) {
      const PrecisionContext ctx = resolve_bits(g, x.get_d(), best.w * c.to_double());
      t.add({to_string(x), best.alpha_star, best.w, dec(bound_main1(a, c, x, ctx))});
    }
    out.emit(t);
    return kOk;
  }
  if (o.kind == "main2") {
    Table t({"x", "bound"});
    for (const mpq_class& x : grid) {
      const PrecisionContext ctx = resolve_bits(g, x.get_d(), 1.0);
      const Bits bits = ctx.working_bits();
      t.add({to_string(x), dec(bound_main2(Constant::parse(o.alpha).evaluate(bits), Constant::parse(o.beta).evaluate(bits),
                                           Real(parse_rational(o.T), bits), Real(x, bits), o.delta))});
    }
    out.emit(t);
    return kOk;
  }
  fail(ErrorKind::invalid_parameters, "--kind must be main1 or main2");
}

struct PsiOpts {
  std::string x = "40";
  std::string T = "3000";
  long random = 0;
  double x_max = 100;
  std::string max_abs;
};

int cmd_psi_sum(const Globals& g, const PsiOpts& o, const Output& out) {
  std::vector<std::pair<mpq_class, mpq_class>> points;
  if (o.random > 0) {
    std::mt19937_64 rng(g.seed);
    std::uniform_int_distribution<long> x_dist(400, static_cast<long>(o.x_max * 100));
    std::uniform_int_distribution<long> t_dist(1, 5000);
    for (long i = 0; i < o.random; ++i) points.emplace_back(mpq_class(x_dist(rng), 100), mpq_class(t_dist(rng)));
    for (auto& p : points) {
      p.first.canonicalize();
    }
  } else {
    const mpq_class T = parse_rational(o.T);
    for (const mpq_class& x : parse_grid(o.x)) points.emplace_back(x, T);
  }
  std::sort(points.begin(), points.end());
  mpq_class x_top = 0;
  for (const auto& p : points) x_top = std::max(x_top, p.first);
  const LambdaSieve sieve = make_sieve(g, sieve_limit_for(x_top));
  Table t({"x", "T", "value", "abs", "terms", "ell_max"});
  bool within = true;
  const std::optional<Real> limit =
      o.max_abs.empty() ? std::nullopt : std::optional<Real>(Real(parse_rational(o.max_abs), 128));
  for (const auto& [x, T] : points) {
    const PrecisionContext ctx = resolve_bits(g, x.get_d(), 1.0);
    const PsiSum s = psi_weak_pentagonal(x, T, sieve, ctx);
    if (limit && s.report.abs_value >= *limit) within = false;
    t.add({to_string(x), to_string(T), dec(s.report.value.re), dec(s.report.abs_value), s.report.term_count,
           s.ell_max});
  }
  out.emit(t);
  return within ? kOk : kAssertionFailed;
}

int cmd_psi_half(const Globals& g, const PsiOpts& o, const Output& out) {
  const mpq_class T = parse_rational(o.T);
  const std::vector<mpq_class> grid = parse_grid(o.x);
  const LambdaSieve sieve = make_sieve(g, sieve_limit_for(grid.back()));
  Table t({"x", "T", "lhs", "rhs", "rel_err", "complement", "psi_top", "psi_tail", "boundary", "alternating",
           "measure_fraction", "ell_max"});
  for (const mpq_class& x : grid) {
    const PrecisionContext ctx = resolve_bits(g, x.get_d(), 1.0);
    const PsiHalf h = psi_interval_half(x, T, sieve, ctx);
    t.add({to_string(x), to_string(T), dec(h.lhs), dec(h.rhs), dec(h.rel_err), dec(h.complement), dec(h.psi_top),
           dec(h.psi_tail), dec(h.boundary_term), dec(h.alternating_sum), dec(h.measure_fraction), h.ell_max});
  }
  out.emit(t);
  return kOk;
}

struct PteOpts {
  long n = 100;
  long m = 1;
  bool no_adjust = false;
  long r_max = 0;
  double max_c = 0;
};

int cmd_pte_construct(const Globals&, const PteOpts& o, const Output& out) {
  const PTEPair pair = construct_pair(o.n, o.m, !o.no_adjust);
  Table t({"i", "x", "y", "N", "adjusted"});
  for (std::size_t i = 0; i < pair.xs.size(); ++i) {
    t.add({static_cast<long>(i + 1), pair.xs[i].get_str(), pair.ys[i].get_str(), pair.N.get_str(), pair.adjusted});
  }
  out.emit(t);
  return kOk;
}

int cmd_pte_verify(const Globals&, const PteOpts& o, const Output& out) {
  const PTEPair pair = construct_pair(o.n, o.m, !o.no_adjust);
  const long regime = pte_k_regime(o.n, o.m);
  const long r_max = o.r_max > 0 ? o.r_max : regime;
  Table t({"r", "diff", "bound", "ratio", "beyond_regime"});
  double worst = 0;
  for (const PTEBoundRow& row : verify_pte_bound(pair, r_max)) {
    const double ratio = row.ratio.to_double();
    if (!row.beyond_regime) worst = std::max(worst, ratio);
    t.add({row.r, row.diff.get_str(), dec(row.bound), ratio, row.beyond_regime});
  }
  out.emit(t);
  return o.max_c > 0 && worst > o.max_c ? kAssertionFailed : kOk;
}

struct FrmOpts {
  std::string r = "2";
  long m_lo = 1;
  long count = 0;
  long c = 100;
};

int cmd_frm_degree(const Globals&, const FrmOpts& o, const Output& out) {
  Table t({"r", "degree", "coeffs", "leading", "coeff_bound_ok"});
  bool ok = true;
  for (const mpq_class& rq : parse_grid(o.r)) {
    const long r = to_long(rq, "r");
    const DegreeReport rep = detect_degree(r, o.m_lo, o.count > 0 ? o.count : r + 4);
    json coeffs = json::array();
    for (const mpz_class& c : rep.poly.coeffs) coeffs.push_back(c.get_str());
    const bool bounded = coefficient_bound_check(r, rep.poly, o.c);
    ok = ok && bounded;
    t.add({r, rep.degree, coeffs, rep.poly.coeffs.back().get_str(), bounded});
  }
  out.emit(t);
  return ok ? kOk : kAssertionFailed;
}

struct LemmaOpts {
  std::string x = "1";
  std::string T = "4";
  std::string k = "2";
  std::string u = "1";
};

int cmd_lemma_sum(const Globals& g, const LemmaOpts& o, const Output& out) {
  const mpq_class x = parse_rational(o.x);
  const mpq_class T = parse_rational(o.T);
  Table t({"k", "value", "exact", "ell_max", "rhs", "ratio"});
  for (const mpq_class& kq : parse_grid(o.k)) {
    const long k = to_long(kq, "k");
    const PrecisionContext ctx = resolve_bits(g, x.get_d(), 0.0);
    const LemmaSum s = lemma_sum(x, T, k, ctx);
    const Real rhs = lemma_rhs(x, T, k, parse_rational(o.u), ctx.working_bits());
    t.add({k, dec(s.value), s.exact ? json(to_string(*s.exact)) : json(nullptr), s.ell_max, dec(rhs),
           dec(abs(s.value) / rhs)});
  }
  out.emit(t);
  return kOk;
}

struct ContourOpts {
  std::string kernel = "exp_sqrt:pi*sqrt(2/3)";
  std::string weight;
  std::string x = "100";
  std::string u = "1";
  double tol = 1e-18;
  double max_rel_err = 1e-12;
  FormOptions form;
};

int cmd_contour_check(const Globals& g, const ContourOpts& o, const Output& out) {
  const KernelSpec spec = parse_kernel(o.kernel, o.weight);
  const QuadraticForm q = o.form.form();
  QuadratureOptions qo;
  qo.tol = o.tol;
  Table t({"x", "quad_re", "quad_im", "discrete_re", "discrete_im", "rel_err", "leg_mags"});
  bool ok = true;
  for (const mpq_class& x : parse_grid(o.x)) {
    const PrecisionContext ctx = resolve_bits(g, mpq_class(x - q.minimum()).get_d(), spec.growth());
    const ResidueCheck rc = residue_identity_check(spec, q, x, parse_rational(o.u), ctx, qo);
    json legs = json::array();
    for (const Real& m : rc.leg_mags) legs.push_back(dec(m));
    ok = ok && rc.rel_err.to_double() <= o.max_rel_err;
    t.add({to_string(x), dec(rc.quad.re), dec(rc.quad.im), dec(rc.discrete.re), dec(rc.discrete.im), dec(rc.rel_err),
           legs});
  }
  out.emit(t);
  return ok ? kOk : kAssertionFailed;
}

struct FitOpts {
  std::string samples;
  std::string kernel = "exp_sqrt:1";
  std::string x = "100:2000:100";
  FormOptions form;
};

int cmd_exponent_fit(const Globals& g, const FitOpts& o, const Output& out) {
  std::vector<ExponentSample> samples;
  json slope_bound = nullptr;
  if (!o.samples.empty()) {
    for (const std::string& item : split(o.samples, ',')) {
      const std::vector<std::string> xy = split(item, ':');
      if (xy.size() != 2) fail(ErrorKind::invalid_parameters, "--samples expects x:abs pairs");
      samples.push_back(ExponentSample::from_abs(parse_rational(xy[0]).get_d(), Real::from_string(xy[1], 128)));
    }
  } else {
    const KernelSpec spec = parse_kernel(o.kernel, "");
    const QuadraticForm q = o.form.form();
    for (const mpq_class& x : parse_grid(o.x)) {
      const PrecisionContext ctx = resolve_bits(g, mpq_class(x - q.minimum()).get_d(), spec.growth());
      samples.push_back(ExponentSample::from_abs(x.get_d(), alternating_sum(spec, q, x, ctx).abs_value));
    }
    if (const auto* k = std::get_if<kernel::ExpSqrt>(&spec.family)) {
      slope_bound = maximize_delta(q.a.get_d(), k->c.to_double()).w * k->c.to_double();
    }
  }
  const ExponentFit fit = empirical_exponent(samples);
  Table t({"w_hat", "intercept", "residual", "samples", "slope_bound"});
  t.add({fit.w_hat, fit.intercept, fit.residual, static_cast<long>(samples.size()), slope_bound});
  out.emit(t);
  return kOk;
}

struct PigeonOpts {
  long n = 10;
  long k = 4;
};

int cmd_pigeonhole(const Globals&, const PigeonOpts& o, const Output& out) {
  const mpq_class c = pigeonhole_c(o.n, o.k);
  Table t({"n", "k", "c", "c_decimal"});
  t.add({o.n, o.k, to_string(c), c.get_d()});
  out.emit(t);
  return kOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::degree_mismatch:
      return kAssertionFailed;
    case ErrorKind::resource:
    case ErrorKind::io:
    case ErrorKind::non_convergence:
      return kResource;
    default:
      return kUsage;
  }
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", message}, {"kind", kind}}.dump() << "\n";
}

std::string json_to_arg(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string joined;
    for (const json& item : v) {
      if (!joined.empty()) joined += ',';
      joined += json_to_arg(item);
    }
    return joined;
  }
  return v.dump();
}

}  // namespace

std::vector<mpq_class> parse_grid(const std::string& spec) {
  std::vector<mpq_class> out;
  if (spec.find(':') != std::string::npos) {
    const std::vector<std::string> parts = split(spec, ':');
    if (parts.size() != 3) fail(ErrorKind::invalid_parameters, "range grid must be lo:hi:step or lo:hi:Ng");
    const mpq_class lo = parse_rational(parts[0]);
    const mpq_class hi = parse_rational(parts[1]);
    if (hi < lo) fail(ErrorKind::invalid_parameters, "grid upper end below lower end");
    if (!parts[2].empty() && parts[2].back() == 'g') {
      const long count = to_long(parse_rational(parts[2].substr(0, parts[2].size() - 1)), "grid point count");
      if (count < 1 || lo <= 0) fail(ErrorKind::invalid_parameters, "geometric grid needs N >= 1 and lo > 0");
      const double l0 = std::log(lo.get_d());
      const double l1 = std::log(hi.get_d());
      for (long i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        out.emplace_back(static_cast<long>(std::llround(std::exp(l0 + t * (l1 - l0)))));
      }
    } else {
      const mpq_class step = parse_rational(parts[2]);
      if (step <= 0) fail(ErrorKind::invalid_parameters, "grid step must be positive");
      for (mpq_class v = lo; v <= hi; v += step) {
        if (out.size() > 10'000'000) fail(ErrorKind::resource, "grid too large");
        out.push_back(v);
      }
    }
  } else {
    for (const std::string& item : split(spec, ',')) out.push_back(parse_rational(item));
  }
  if (out.empty()) fail(ErrorKind::invalid_parameters, "empty grid");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> expand_config(const std::string& json_text, const std::vector<std::string>& user_args) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_parameters, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::invalid_parameters, "config must be a JSON object");

  std::vector<std::string> rest = user_args;
  std::string command;
  auto named = std::find_if(rest.begin(), rest.end(), [](const std::string& a) {
    return std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end();
  });
  if (named != rest.end()) {
    command = *named;
    rest.erase(named);
  } else if (doc.contains("command")) {
    command = doc["command"].get<std::string>();
  }

  std::vector<std::string> args;
  if (!command.empty()) args.push_back(command);
  for (const auto& [key, value] : doc.items()) {
    if (key == "command" || key == "config" || value.is_null()) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + key);
      continue;
    }
    args.push_back("--" + key);
    args.push_back(json_to_arg(value));
  }
  args.insert(args.end(), rest.begin(), rest.end());
  return args;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args = raw_args;
  try {
    for (std::size_t i = 0; i < raw_args.size(); ++i) {
      std::string path;
      if (raw_args[i] == "--config" && i + 1 < raw_args.size()) path = raw_args[i + 1];
      if (raw_args[i].rfind("--config=", 0) == 0) path = raw_args[i].substr(9);
      if (path.empty()) continue;
      std::ifstream in(path);
      if (!in) fail(ErrorKind::io, "cannot read config " + path);
      std::stringstream buffer;
      buffer << in.rdbuf();
      args = expand_config(buffer.str(), raw_args);
      break;
    }
  } catch (const Error& e) {
    report_error(err, std::string(to_string(e.kind())), e.what());
    return exit_code_for(e.kind());
  }

  CLI::App app{"Oscillating-sum experiments: partition, prime and PTE sums with exact and high-precision arithmetic",
               "osctool"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--bits", g.bits, "Working precision in bits, or 'auto'");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "Write output to this file instead of stdout");
  app.add_option("--sieve-cache", g.sieve_cache, "Sieve cache file (read if present, written otherwise)");
  app.add_option("--seed", g.seed, "Seed for randomised point selection");
  app.add_option("--config", g.config, "JSON file with default flags; command-line flags win");

  std::map<std::string, std::function<int(const Output&)>> handlers;

  PntOpts pnt;
  auto* s_pnt = app.add_subcommand("pnt-verify", "Check Euler's pentagonal recurrence checksum for 1..x_max");
  s_pnt->add_option("--x-max", pnt.x_max);
  s_pnt->add_option("--corrupt", pnt.corrupt, "Test mode: add 1 to p(K) before checking");
  handlers["pnt-verify"] = [&](const Output& o) { return cmd_pnt_verify(g, pnt, o); };

  SumOpts sum;
  auto* s_sum = app.add_subcommand("osc-sum", "Alternating kernel sums over q(n) < x");
  s_sum->add_option("--kernel", sum.kernel,
                    "exp_sqrt:C | p1 | p2 | p3 | p4 | sqrt_p1 | bessel:A:C | power:E | complex_exp:A:B | distinct | "
                    "mod5:A[:SHIFT[:SCALE]] | meinardus");
  s_sum->add_option("--weight", sum.weight, "h(n) = (alpha n + beta)^t as alpha,beta,t");
  s_sum->add_option("--x", sum.x, "Grid: list, lo:hi:step or lo:hi:Ng");
  sum.form.attach(s_sum);
  handlers["osc-sum"] = [&](const Output& o) { return cmd_osc_sum(g, sum, o); };

  BoundOpts bound;
  auto* s_bound = app.add_subcommand("bound", "Predicted bounds: main1 (Delta maximisation) or main2 (complex exponent)");
  s_bound->add_option("--kind", bound.kind)->check(CLI::IsMember({"main1", "main2"}));
  s_bound->add_option("--a", bound.a);
  s_bound->add_option("--c", bound.c);
  s_bound->add_option("--alpha", bound.alpha);
  s_bound->add_option("--beta", bound.beta);
  s_bound->add_option("--T", bound.T);
  s_bound->add_option("--delta", bound.delta);
  s_bound->add_option("--x", bound.x);
  handlers["bound"] = [&](const Output& o) { return cmd_bound(g, bound, o); };

  PsiOpts psi;
  auto* s_psi = app.add_subcommand("psi-sum", "Alternating Chebyshev psi sums");
  s_psi->add_option("--x", psi.x);
  s_psi->add_option("--T", psi.T);
  s_psi->add_option("--random", psi.random, "Evaluate this many random (x, T) points instead of the grid");
  s_psi->add_option("--x-max", psi.x_max, "Upper end for random x");
  s_psi->add_option("--max-abs", psi.max_abs, "Exit 1 when some |S| reaches this value");
  handlers["psi-sum"] = [&](const Output& o) { return cmd_psi_sum(g, psi, o); };

  PsiOpts half;
  auto* s_half = app.add_subcommand("psi-half", "Interval-half identity for psi");
  s_half->add_option("--x", half.x);
  s_half->add_option("--T", half.T);
  handlers["psi-half"] = [&](const Output& o) { return cmd_psi_half(g, half, o); };

  PteOpts pte;
  auto* s_pc = app.add_subcommand("pte-construct", "Build the approximate PTE pair");
  auto* s_pv = app.add_subcommand("pte-verify", "Power-sum differences against N^{r(2m+1/2)}");
  for (auto* s : {s_pc, s_pv}) {
    s->add_option("--n", pte.n);
    s->add_option("--m", pte.m);
    s->add_flag("--no-adjust", pte.no_adjust, "Use the bare floor for N");
  }
  s_pv->add_option("--r-max", pte.r_max, "Largest power (default: the k regime)");
  s_pv->add_option("--max-c", pte.max_c, "Exit 1 when the largest in-regime ratio exceeds this");
  handlers["pte-construct"] = [&](const Output& o) { return cmd_pte_construct(g, pte, o); };
  handlers["pte-verify"] = [&](const Output& o) { return cmd_pte_verify(g, pte, o); };

  FrmOpts frm;
  auto* s_frm = app.add_subcommand("frm-degree", "Exact degree and interpolant of f_r(M)");
  s_frm->add_option("--r", frm.r, "Grid of r values");
  s_frm->add_option("--m-lo", frm.m_lo);
  s_frm->add_option("--count", frm.count, "Samples (default r + 4)");
  s_frm->add_option("--c", frm.c, "Coefficient bound constant");
  handlers["frm-degree"] = [&](const Output& o) { return cmd_frm_degree(g, frm, o); };

  LemmaOpts lemma;
  auto* s_lemma = app.add_subcommand("lemma-sum", "Alternating sums of (x - l^2/T)^{k/2}");
  s_lemma->add_option("--x", lemma.x);
  s_lemma->add_option("--T", lemma.T);
  s_lemma->add_option("--k", lemma.k, "Grid of k values");
  s_lemma->add_option("--u", lemma.u, "Contour height factor in the bound");
  handlers["lemma-sum"] = [&](const Output& o) { return cmd_lemma_sum(g, lemma, o); };

  ContourOpts contour;
  auto* s_contour = app.add_subcommand("contour-check", "Quadrature of K/sin(pi z) against the residue sum");
  s_contour->add_option("--kernel", contour.kernel);
  s_contour->add_option("--weight", contour.weight);
  s_contour->add_option("--x", contour.x);
  s_contour->add_option("--u", contour.u);
  s_contour->add_option("--tol", contour.tol);
  s_contour->add_option("--max-rel-err", contour.max_rel_err);
  contour.form.attach(s_contour);
  handlers["contour-check"] = [&](const Output& o) { return cmd_contour_check(g, contour, o); };

  FitOpts fit;
  auto* s_fit = app.add_subcommand("exponent-fit", "Fit log|S| = w sqrt(x) + b");
  s_fit->add_option("--samples", fit.samples, "x:abs pairs, comma separated");
  s_fit->add_option("--kernel", fit.kernel);
  s_fit->add_option("--x", fit.x);
  fit.form.attach(s_fit);
  handlers["exponent-fit"] = [&](const Output& o) { return cmd_exponent_fit(g, fit, o); };

  PigeonOpts pigeon;
  auto* s_pigeon = app.add_subcommand("pigeonhole", "Pigeonhole baseline exponent");
  s_pigeon->add_option("--n", pigeon.n);
  s_pigeon->add_option("--k", pigeon.k);
  handlers["pigeonhole"] = [&](const Output& o) { return cmd_pigeonhole(g, pigeon, o); };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", e.what());
    return kUsage;
  }

  const Output output{g, out};
  try {
    for (CLI::App* sub : app.get_subcommands()) {
      if (sub->get_help_ptr() && sub->get_help_ptr()->count() > 0) {
        out << sub->help();
        return kOk;
      }
      return handlers.at(sub->get_name())(output);
    }
  } catch (const Error& e) {
    report_error(err, std::string(to_string(e.kind())), e.what());
    return exit_code_for(e.kind());
  } catch (const std::bad_alloc&) {
    report_error(err, "resource", "out of memory");
    return kResource;
  }
  return kUsage;
}

}  // namespace osc::cli
