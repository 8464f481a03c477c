#include "ergolab/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ergolab/report.hpp"

namespace ergolab {

namespace fs = std::filesystem;

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

double Rng::uniform(double lo, double hi) { return lo + (uniform() + 1.0) * 0.5 * (hi - lo); }

std::uint64_t Rng::next() {
  // splitmix64
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

using Section = std::map<std::string, std::string>;
using Config = std::map<std::string, Section>;

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

Config parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  Config cfg;
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      cfg[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": key outside any section");
    cfg[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return cfg;
}

const Section& need_section(const Config& cfg, const std::string& name) {
  auto it = cfg.find(name);
  if (it == cfg.end()) throw std::invalid_argument("scenario lacks [" + name + "] section");
  return it->second;
}

std::string get_str(const Section& s, const std::string& key, const std::string& fallback = {}) {
  auto it = s.find(key);
  return it == s.end() ? fallback : it->second;
}

std::string need_str(const Section& s, const std::string& key, const std::string& section) {
  auto it = s.find(key);
  if (it == s.end())
    throw std::invalid_argument("scenario [" + section + "] lacks key '" + key + "'");
  return it->second;
}

double to_num(const std::string& v, const std::string& what) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw std::invalid_argument("bad numeric value for " + what + ": '" + v + "'");
  }
}

double get_num(const Section& s, const std::string& key, double fallback) {
  auto it = s.find(key);
  return it == s.end() ? fallback : to_num(it->second, key);
}

std::vector<double> split_nums(const std::string& v, const std::string& what) {
  std::vector<double> out;
  std::istringstream in(v);
  std::string tok;
  while (in >> tok) out.push_back(to_num(tok, what));
  return out;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SpacePtr build_space(const Section& s) {
  const std::string kind = get_str(s, "kind", "integer_range");
  const std::string label = get_str(s, "label");
  if (kind == "integer_range") {
    const long count = static_cast<long>(get_num(s, "count", 64));
    if (count < 1) throw std::invalid_argument("[space] count must be >= 1");
    return MeasureSpace::integer_range(static_cast<std::size_t>(count), get_num(s, "weight", 1.0),
                                       label);
  }
  if (kind == "literal") {
    const auto weights = split_nums(need_str(s, "weights", "space"), "weights");
    std::vector<long long> cells;
    if (s.count("cells")) {
      for (double c : split_nums(s.at("cells"), "cells")) cells.push_back(static_cast<long long>(c));
    } else {
      for (std::size_t i = 0; i < weights.size(); ++i) cells.push_back(static_cast<long long>(i));
    }
    return MeasureSpace::create(std::move(cells), weights, label);
  }
  throw std::invalid_argument("[space] unknown kind: " + kind);
}

std::vector<double> named_generator(const std::string& name, double scale, std::size_t n) {
  std::vector<double> q(n * n, 0.0);
  if (name == "laplacian") {
    for (std::size_t i = 0; i < n; ++i) {
      q[i * n + i] = -2.0 * scale;
      if (i > 0) q[i * n + i - 1] = scale;
      if (i + 1 < n) q[i * n + i + 1] = scale;
    }
    return q;
  }
  if (name == "decay") {
    for (std::size_t i = 0; i < n; ++i) q[i * n + i] = -scale;
    return q;
  }
  throw std::invalid_argument("[semigroup] unknown generator: " + name);
}

std::string resolve_path(const std::string& value, const fs::path& base) {
  fs::path p(value);
  if (p.is_absolute()) return p.string();
  return (base / p).string();
}

Semigroup build_semigroup(const Section& s, const SpacePtr& space, std::optional<double> step,
                          const fs::path& base) {
  const std::string kind = need_str(s, "kind", "semigroup");
  const double h = step.value_or(get_num(s, "h", 1.0));
  if (kind == "shift_flow") return Semigroup::shift_flow(space, h);
  if (kind == "twisted_shift_flow")
    return Semigroup::twisted_shift_flow(space, h, get_num(s, "alpha", std::numbers::pi));
  if (kind == "generator_exponential") {
    const std::string gen = get_str(s, "generator", "laplacian");
    return Semigroup::generator_exponential(
        space, h, named_generator(gen, get_num(s, "scale", 1.0), space->size()));
  }
  if (kind == "kernel_power") {
    if (s.count("kernel_csv"))
      return Semigroup::from_kernel(
          space, h, load_kernel_csv(resolve_path(s.at("kernel_csv"), base), space->size()));
    const std::string named = get_str(s, "kernel", "scaled_identity");
    if (named == "scaled_identity") {
      KernelMatrix k = KernelMatrix::identity(space->size());
      const double factor = get_num(s, "factor", 1.0);
      for (std::size_t i = 0; i < k.dim(); ++i) k.at(i, i) = Complex{factor, 0.0};
      return Semigroup::from_kernel(space, h, std::move(k));
    }
    throw std::invalid_argument("[semigroup] unknown kernel: " + named);
  }
  throw std::invalid_argument("[semigroup] unknown kind: " + kind);
}

Weight build_weight(const Section& s, const fs::path& base) {
  const std::string kind = get_str(s, "kind", "one");
  if (kind == "one") return weights::one();
  if (kind == "pure_phase") return weights::pure_phase(get_num(s, "theta", 1.0));
  if (kind == "square_wave") return weights::square_wave(WeightMode::besicovitch_at_infinity);
  if (kind == "square_wave_local") return weights::square_wave(WeightMode::locally_besicovitch);
  if (kind == "phase_with_decay") return weights::phase_with_decay(get_num(s, "theta", 1.0));
  if (kind == "trig") {
    const auto re = split_nums(need_str(s, "terms_re", "weight"), "terms_re");
    const auto im = split_nums(need_str(s, "terms_im", "weight"), "terms_im");
    const auto freq = split_nums(need_str(s, "terms_freq", "weight"), "terms_freq");
    if (re.size() != im.size() || re.size() != freq.size() || re.empty())
      throw std::invalid_argument("[weight] trig term arrays must have equal nonzero length");
    TrigPolynomial p;
    for (std::size_t i = 0; i < re.size(); ++i) p.terms.push_back({Complex{re[i], im[i]}, freq[i]});
    return weights::trig(std::move(p));
  }
  if (kind == "csv") return load_weight_csv(resolve_path(need_str(s, "csv", "weight"), base));
  throw std::invalid_argument("[weight] unknown kind: " + kind);
}

Field build_function(const Section& s, const SpacePtr& space, std::uint64_t seed) {
  const std::string kind = get_str(s, "kind", "delta");
  const std::size_t n = space->size();
  if (kind == "delta") {
    const auto idx = static_cast<std::size_t>(get_num(s, "index", 0));
    return Field::delta(space, idx,
                        Complex{get_num(s, "amplitude_re", 1.0), get_num(s, "amplitude_im", 0.0)});
  }
  if (kind == "literal") {
    const auto re = split_nums(need_str(s, "values_re", "function"), "values_re");
    std::vector<double> im(re.size(), 0.0);
    if (s.count("values_im")) im = split_nums(s.at("values_im"), "values_im");
    if (re.size() != n || im.size() != n)
      throw std::invalid_argument("[function] literal value arrays must match the cell count");
    std::vector<Complex> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = Complex{re[i], im[i]};
    return Field(space, std::move(v));
  }
  if (kind == "random_complex") {
    Rng rng(seed);
    std::vector<Complex> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = Complex{rng.uniform(), rng.uniform()};
    return Field(space, std::move(v));
  }
  if (kind == "gaussian_bump") {
    const double center = get_num(s, "center", static_cast<double>(n) / 2.0);
    const double width = get_num(s, "width", static_cast<double>(n) / 8.0);
    std::vector<Complex> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = (static_cast<double>(i) - center) / width;
      v[i] = Complex{std::exp(-0.5 * d * d), 0.0};
    }
    return Field(space, std::move(v));
  }
  throw std::invalid_argument("[function] unknown kind: " + kind);
}

std::vector<double> build_t_grid(const Section& s, double h, LimitDirection direction) {
  const std::string spec = get_str(s, "t_grid", "linear 1 32 32");
  std::istringstream in(spec);
  std::string kind;
  in >> kind;
  std::vector<double> grid;
  if (kind == "literal") {
    // taken in the listed order; the scenario author owns the direction
    std::string tok;
    while (in >> tok) grid.push_back(to_num(tok, "t_grid"));
    for (double& t : grid) t = std::max(1.0, std::round(t / h)) * h;
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
  }
  if (kind == "linear" || kind == "geometric") {
    double start = 0, stop = 0;
    long count = 0;
    if (!(in >> start >> stop >> count) || count < 1 || !(start > 0) || !(stop >= start))
      throw std::invalid_argument("[run] t_grid spec must be '<kind> <start> <stop> <count>'");
    for (long i = 0; i < count; ++i) {
      const double u = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      grid.push_back(kind == "linear" ? start + u * (stop - start)
                                      : start * std::pow(stop / start, u));
    }
  } else {
    throw std::invalid_argument("[run] unknown t_grid kind: " + kind);
  }
  // snap to the step grid and drop duplicates
  for (double& t : grid) t = std::max(1.0, std::round(t / h)) * h;
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (direction == LimitDirection::to_zero) std::reverse(grid.begin(), grid.end());
  return grid;
}

} // namespace

KernelMatrix load_kernel_csv(const std::string& path, std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open kernel csv: " + path);
  KernelMatrix k(dim);
  std::string line;
  bool header = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    long long r = 0, c = 0;
    double re = 0, im = 0;
    if (!(row >> r >> c >> re >> im))
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected row,col,re,im");
    if (r < 0 || c < 0 || static_cast<std::size_t>(r) >= dim || static_cast<std::size_t>(c) >= dim)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": index out of range");
    k.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = Complex{re, im};
  }
  return k;
}

Weight load_weight_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open weight csv: " + path);
  auto table = std::make_shared<std::vector<std::pair<double, Complex>>>();
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double s = 0, re = 0, im = 0;
    if (!(row >> s >> re >> im)) throw std::runtime_error(path + ": expected s,re,im rows");
    table->emplace_back(s, Complex{re, im});
  }
  if (table->empty()) throw std::runtime_error(path + ": empty weight table");
  std::sort(table->begin(), table->end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  Weight w;
  double bound = 0.0;
  for (const auto& [s, v] : *table) bound = std::max(bound, std::abs(v));
  w.bound = bound;
  w.mode = WeightMode::plain_bounded;
  w.name = "csv";
  w.evaluator = [table, path](double s) {
    auto it = std::lower_bound(table->begin(), table->end(), s,
                               [](const auto& row, double key) { return row.first < key; });
    for (auto cand : {it, it == table->begin() ? it : std::prev(it)}) {
      if (cand != table->end() && std::abs(cand->first - s) <= 1e-9 * std::max(1.0, std::abs(s)))
        return cand->second;
    }
    throw std::invalid_argument("tabulated weight evaluated off its grid: s = " +
                                format_double(s) + " (" + path + ")");
  };
  return w;
}

Scenario load_scenario(const std::string& path, const ScenarioOverrides& overrides) {
  std::ifstream raw(path, std::ios::binary);
  if (!raw) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream bytes;
  bytes << raw.rdbuf();

  const Config cfg = parse_config(path);
  Scenario sc;
  sc.path = path;
  sc.hash = fnv1a_hex(bytes.str());

  const fs::path base = fs::path(path).parent_path();
  const Section& run = need_section(cfg, "run");
  sc.seed = overrides.seed.value_or(static_cast<std::uint64_t>(get_num(run, "seed", 1)));
  sc.space = build_space(need_section(cfg, "space"));
  sc.semigroup = build_semigroup(need_section(cfg, "semigroup"), sc.space, overrides.step, base);
  sc.weight = cfg.count("weight") ? build_weight(cfg.at("weight"), base) : weights::one();
  sc.function = cfg.count("function")
                    ? build_function(cfg.at("function"), sc.space, sc.seed)
                    : Field::delta(sc.space, 0);

  if (cfg.count("function")) {
    const std::string tail = get_str(cfg.at("function"), "tail", "finite_support");
    if (tail == "finite_support") sc.tail = TailClass::finite_support;
    else if (tail == "harmonic_decay") sc.tail = TailClass::harmonic_decay;
    else if (tail == "constant_tail") sc.tail = TailClass::constant_tail;
    else throw std::invalid_argument("[function] unknown tail class: " + tail);
    sc.tail_level = get_num(cfg.at("function"), "tail_level", 0.0);
  }

  sc.p = get_num(run, "p", 1.0);
  sc.epsilon = get_num(run, "epsilon", 0.1);
  sc.threshold = get_num(run, "threshold", 1e-3);
  const std::string dir = get_str(run, "direction", "to_infinity");
  if (dir == "to_infinity") sc.direction = LimitDirection::to_infinity;
  else if (dir == "to_zero") sc.direction = LimitDirection::to_zero;
  else throw std::invalid_argument("[run] unknown direction: " + dir);
  sc.t_grid = build_t_grid(run, sc.semigroup->time_step(), sc.direction);
  if (run.count("lambdas")) sc.lambda_grid = split_nums(run.at("lambdas"), "lambdas");
  if (run.count("norms")) {
    std::istringstream in(run.at("norms"));
    std::string tok;
    while (in >> tok) sc.norms.push_back(norms::preset(tok));
  }
  sc.out_dir = overrides.out_dir.value_or(get_str(run, "out", "out"));
  return sc;
}

bool RunRecord::hard_pass() const {
  for (const CheckVerdict& v : verdicts)
    if (!v.estimate_grade && !v.pass) return false;
  return true;
}

bool RunRecord::strict_pass() const {
  for (const CheckVerdict& v : verdicts)
    if (!v.pass) return false;
  return true;
}

namespace {

std::vector<std::string> preamble_for(const Scenario& sc, const std::string& sub) {
  return {"scenario_hash=" + sc.hash, "seed=" + std::to_string(sc.seed), "subcommand=" + sub};
}

std::vector<Field> sample_fields(const Scenario& sc, std::size_t count) {
  std::vector<Field> samples;
  samples.push_back(*sc.function);
  Rng rng(sc.seed ^ 0xabcdef12345ull);
  for (std::size_t k = 1; k < count; ++k) {
    std::vector<Complex> v(sc.space->size());
    for (Complex& c : v) c = Complex{rng.uniform(), rng.uniform()};
    samples.emplace_back(sc.space, std::move(v));
  }
  return samples;
}

void pipeline_check_ds(const Scenario& sc, const std::string& dir, RunRecord& rec) {
  const Semigroup& t = *sc.semigroup;
  const auto samples = sample_fields(sc, 8);

  DsReport ds = verify_ds(t, samples);
  {
    CsvWriter csv(dir + "/ds_ratios.csv", {"s", "l1_contraction_ratio", "sup_contraction_ratio"},
                  preamble_for(sc, "check-ds"));
    for (const DsRatioRow& row : ds.rows) {
      csv.field(row.s).field(row.l1_ratio).field(row.linf_ratio);
      csv.end_row();
    }
    rec.artifacts.push_back(dir + "/ds_ratios.csv");
  }
  rec.verdicts.push_back({"ds_contraction", ds.pass, false,
                          "max l1 ratio " + format_double(ds.max_l1_ratio) + ", max sup ratio " +
                              format_double(ds.max_linf_ratio)});

  const double h = t.time_step();
  SemigroupLawReport law = verify_semigroup(t, h, 2.0 * h, samples);
  rec.verdicts.push_back(
      {"semigroup_law", law.pass, false, "max residual " + format_double(law.max_residual)});

  ContinuityReport cont = verify_strong_continuity(t, *sc.function, std::min(sc.p, 2.0));
  {
    CsvWriter csv(dir + "/strong_continuity.csv", {"s", "deviation_norm", "grid_floor"},
                  preamble_for(sc, "check-ds"));
    for (const ContinuityRow& row : cont.rows) {
      csv.field(row.s).field(row.deviation).field(cont.grid_floor);
      csv.end_row();
    }
    rec.artifacts.push_back(dir + "/strong_continuity.csv");
  }
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < cont.rows.size(); ++i)
    decreasing = decreasing && cont.rows[i + 1].deviation <= cont.rows[i].deviation + 1e-12;
  rec.verdicts.push_back({"strong_continuity", cont.grid_floor || decreasing, true,
                          cont.grid_floor ? "grid floor reported" : "deviations decrease toward 0"});
}

void write_egorov_csv(const std::string& path, const EgorovReport& e,
                      const std::vector<std::string>& preamble,
                      std::vector<std::string>& artifacts) {
  CsvWriter csv(path, {"t0", "tail_sup", "kept_measure"}, preamble);
  const double kept = e.kept.included_measure();
  for (const auto& [t0, sup] : e.tail_sup) {
    csv.field(t0).field(sup).field(kept);
    csv.end_row();
  }
  artifacts.push_back(path);
}

void write_norm_table(const std::string& path, const std::vector<NormRow>& rows,
                      const std::vector<std::string>& preamble,
                      std::vector<std::string>& artifacts) {
  CsvWriter csv(path, {"t", "norm_gap"}, preamble);
  for (const NormRow& r : rows) {
    csv.field(r.t).field(r.value);
    csv.end_row();
  }
  artifacts.push_back(path);
}

void pipeline_converge(const Scenario& sc, const std::string& dir, RunRecord& rec) {
  const Semigroup& t = *sc.semigroup;
  const auto preamble = preamble_for(sc, "converge");

  ConvergenceReport rep = [&] {
    if (sc.direction == LimitDirection::to_zero)
      return identify_local_limit(t, sc.weight, *sc.function, sc.p, sc.t_grid, sc.epsilon,
                                  sc.threshold);
    std::optional<Field> known;
    if (t.kind() == SemigroupKind::shift_flow) known = Field::zero(sc.space);
    return flow_convergence_report(t, sc.weight, *sc.function, sc.p, sc.t_grid, sc.epsilon, known,
                                   sc.threshold);
  }();

  write_egorov_csv(dir + "/egorov.csv", *rep.egorov, preamble, rec.artifacts);
  write_norm_table(dir + "/mean_norms.csv", rep.mean_norm_table, preamble, rec.artifacts);
  {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [t0, sup] : rep.egorov->tail_sup) pts.emplace_back(t0, sup);
    write_polyline_svg(dir + "/egorov_tail.svg", pts, "kept-set tail sup vs t0", preamble);
    rec.artifacts.push_back(dir + "/egorov_tail.svg");
  }

  AverageProfile prof = average_profile(t, sc.weight, *sc.function, [&] {
    std::vector<double> asc(sc.t_grid);
    std::sort(asc.begin(), asc.end());
    return asc;
  }(), sc.p);
  {
    CsvWriter csv(dir + "/averages.csv", {"t", "cell", "re", "im"}, preamble);
    for (std::size_t j = 0; j < prof.fields.size(); ++j) {
      const Field& m = prof.fields[j];
      for (std::size_t i = 0; i < m.size(); ++i) {
        csv.field(prof.t_grid[j])
            .field(static_cast<long long>(m.space().cells()[i]))
            .field(m[i].real())
            .field(m[i].imag());
        csv.end_row();
      }
    }
    rec.artifacts.push_back(dir + "/averages.csv");
  }
  rec.verdicts.push_back({"average_contraction", prof.contraction_ok, false,
                          "max ratio " + format_double(prof.max_contraction_ratio)});
  if (t.kind() == SemigroupKind::generator_exponential) {
    const double t_max = *std::max_element(sc.t_grid.begin(), sc.t_grid.end());
    RefinementBias bias = quadrature_bias(t, sc.weight, *sc.function, t_max, sc.p);
    rec.verdicts.push_back({"quadrature_bias", bias.bias <= 0.5 * sc.weight.bound, true,
                            "step-halving gap " + format_double(bias.bias) + " at t = " +
                                format_double(t_max)});
  }
  rec.verdicts.push_back({"egorov_tail", rep.egorov->pass, true,
                          "final tail sup " +
                              format_double(rep.egorov->tail_sup.empty()
                                                ? 0.0
                                                : rep.egorov->tail_sup.back().second)});
  if (rep.lambda_estimate) {
    rec.verdicts.push_back({"local_limit_identification",
                            rep.lambda_gap <= rep.transfer_tolerance + 1e-9, false,
                            "lambda gap " + format_double(rep.lambda_gap) + " vs tolerance " +
                                format_double(rep.transfer_tolerance)});
  }

  for (const SymmetricNormSpec& e : sc.norms) {
    if (contains_one(e)) {
      rec.verdicts.push_back({"limit_in_" + e.name, true, false,
                              "rejected: space contains the constant one (outside hypotheses)"});
      continue;
    }
    LimitSpaceReport ls = limit_in_space_check(prof, *sc.function, e);
    rec.verdicts.push_back({"limit_in_" + e.name, ls.pass, false,
                            "majorization margin " + format_double(ls.majorization.worst_margin) +
                                ", norm " + format_double(ls.limit_norm) + " <= " +
                                format_double(ls.norm_cap)});
  }
}

void pipeline_maximal(const Scenario& sc, const std::string& dir, RunRecord& rec) {
  const Semigroup& t = *sc.semigroup;
  std::vector<double> ascending(sc.t_grid);
  std::sort(ascending.begin(), ascending.end());
  const std::vector<double> lambdas =
      sc.lambda_grid.empty() ? default_lambda_grid(*sc.function, sc.p, sc.weight.bound)
                             : sc.lambda_grid;
  MaximalReport rep = weak_type_check(t, sc.weight, *sc.function, sc.p, ascending, lambdas);

  const auto preamble = preamble_for(sc, "maximal");
  {
    CsvWriter csv(dir + "/weak_type.csv", {"lambda", "measure", "bound", "ratio", "pass"},
                  preamble);
    for (const MaximalRow& row : rep.rows) {
      csv.field(row.lambda).field(row.measure).field(row.bound).field(row.ratio).field(row.pass);
      csv.end_row();
    }
    rec.artifacts.push_back(dir + "/weak_type.csv");
  }
  if (!rep.discrete_rows.empty()) {
    CsvWriter csv(dir + "/weak_type_discrete_constant.csv",
                  {"lambda", "measure", "bound", "ratio", "pass"}, preamble);
    for (const MaximalRow& row : rep.discrete_rows) {
      csv.field(row.lambda).field(row.measure).field(row.bound).field(row.ratio).field(row.pass);
      csv.end_row();
    }
    rec.artifacts.push_back(dir + "/weak_type_discrete_constant.csv");
  }
  {
    std::vector<std::pair<double, double>> pts;
    for (const MaximalRow& row : rep.rows) pts.emplace_back(row.lambda, row.ratio);
    write_polyline_svg(dir + "/weak_type_ratio.svg", pts, "weak-type ratio vs lambda", preamble);
    rec.artifacts.push_back(dir + "/weak_type_ratio.svg");
  }
  write_field_csv(dir + "/maximal_field.csv", rep.maximal_field, preamble);
  rec.artifacts.push_back(dir + "/maximal_field.csv");

  rec.verdicts.push_back({"weak_type_bound", rep.pass, false,
                          std::to_string(rep.rows.size()) + " thresholds checked"});
}

void pipeline_weights(const Scenario& sc, const std::string& dir, RunRecord& rec) {
  const auto preamble = preamble_for(sc, "weights");
  const Weight& w = sc.weight;

  // the recorded bound must dominate the modulus on every sampled grid point
  double sup_sample = 0.0;
  const double t_extent = *std::max_element(sc.t_grid.begin(), sc.t_grid.end());
  const long steps = sc.semigroup->steps_for(t_extent);
  for (long k = 0; k < steps; ++k)
    sup_sample = std::max(sup_sample, std::abs(w(k * sc.semigroup->time_step())));
  rec.verdicts.push_back({"weight_bound", sup_sample <= w.bound + 1e-12, false,
                          "sampled sup " + format_double(sup_sample) + " vs bound " +
                              format_double(w.bound)});

  if (!w.has_approximants()) {
    rec.verdicts.push_back({"besicovitch_defining_property", true, true,
                            "weight carries no approximants; nothing to verify"});
    return;
  }
  // the grid already carries the approach ordering of the scenario direction
  const std::vector<double>& grid = sc.t_grid;

  CsvWriter csv(dir + "/weight_deviation.csv", {"n", "t", "mean_deviation", "tail_estimate"},
                preamble);
  bool defining = true;
  std::string detail;
  for (std::size_t i = 0; i < w.approximants.size(); ++i) {
    const DeviationProfile prof =
        limsup_profile(w, w.approximants[i], sc.direction, grid, sc.semigroup->time_step());
    for (const DeviationRow& row : prof.rows) {
      csv.field(static_cast<long long>(i + 1)).field(row.t).field(row.deviation)
          .field(prof.tail_estimate);
      csv.end_row();
    }
    const double target = 1.0 / static_cast<double>(i + 1) + 1e-3;
    if (prof.tail_estimate >= target) {
      defining = false;
      detail = "approximant " + std::to_string(i + 1) + " tail " +
               format_double(prof.tail_estimate) + " >= " + format_double(target);
    }
  }
  rec.artifacts.push_back(dir + "/weight_deviation.csv");
  rec.verdicts.push_back({"besicovitch_defining_property", defining, true,
                          defining ? "tail estimates below 1/n targets" : detail});
}

void pipeline_rearrange(const Scenario& sc, const std::string& dir, RunRecord& rec) {
  const auto preamble = preamble_for(sc, "rearrange");
  const Field& f = *sc.function;

  RearrangementProfile prof = rearrange(f);
  {
    CsvWriter csv(dir + "/rearrangement.csv", {"t", "level", "cumulative"}, preamble);
    for (std::size_t k = 0; k < prof.breakpoints.size(); ++k) {
      csv.field(prof.breakpoints[k]).field(prof.levels[k]).field(prof.cumulative[k]);
      csv.end_row();
    }
    rec.artifacts.push_back(dir + "/rearrangement.csv");
  }

  // scaled averages must be majorized by f at every horizon
  std::vector<double> ascending(sc.t_grid);
  std::sort(ascending.begin(), ascending.end());
  AverageProfile averages = average_profile(*sc.semigroup, sc.weight, f, ascending, sc.p);
  double worst = std::numeric_limits<double>::infinity();
  for (const Field& m : averages.fields) {
    std::vector<Complex> scaled(m.values().begin(), m.values().end());
    for (Complex& c : scaled) c *= 1.0 / sc.weight.bound;
    const MajorizationResult mr = majorizes(f, Field(f.space_ptr(), std::move(scaled)));
    worst = std::min(worst, mr.worst_margin);
  }
  rec.verdicts.push_back({"average_majorization", worst >= -1e-12, false,
                          "worst cumulative margin " + format_double(worst)});

  const std::vector<double> probes = {0.25, 0.5, 1.0, 2.0};
  FavaReport fava = fava_membership(f, sc.tail, probes, sc.tail_level);
  {
    CsvWriter csv(dir + "/fava.csv", {"member", "witness_infinite", "max_distribution"},
                  preamble);
    csv.field(fava.member).field(fava.witness_infinite).field(fava.max_distribution);
    csv.end_row();
    rec.artifacts.push_back(dir + "/fava.csv");
  }
  if (fava.member) {
    const auto [g, h] = fava_decompose(f, 0.5, sc.tail, sc.tail_level);
    const bool exact = lp_norm(combine(1.0, combine(1.0, g, 1.0, h), -1.0, f), 1.0) == 0.0 &&
                       lp_norm(h, kInfExponent) <= 0.5;
    rec.verdicts.push_back({"fava_decomposition", exact, false,
                            "split at 0.5, sup part " + format_double(lp_norm(h, kInfExponent))});
  } else {
    rec.verdicts.push_back({"fava_membership", true, false,
                            "non-member as declared (level " + format_double(fava.failing_lambda) +
                                " infinite)"});
  }

  if (!sc.norms.empty()) {
    CsvWriter csv(dir + "/symmetric_norms.csv", {"norm", "value", "contains_one"}, preamble);
    for (const SymmetricNormSpec& e : sc.norms) {
      csv.field(e.name).field(symmetric_norm(f, e)).field(contains_one(e));
      csv.end_row();
    }
    rec.artifacts.push_back(dir + "/symmetric_norms.csv");
  }
}

void write_run_record(const std::string& dir, const RunRecord& rec) {
  CsvWriter csv(dir + "/run_record.csv", {"check", "estimate_grade", "pass", "detail"},
                {"scenario=" + rec.scenario_path, "scenario_hash=" + rec.scenario_hash,
                 "seed=" + std::to_string(rec.seed), "subcommand=" + rec.subcommand,
                 "wall_ms=" + format_double(rec.wall_ms)});
  for (const CheckVerdict& v : rec.verdicts) {
    csv.field(v.name).field(v.estimate_grade).field(v.pass).field(v.detail);
    csv.end_row();
  }
}

} // namespace

RunRecord run_scenario(const std::string& subcommand, const Scenario& sc) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.scenario_path = sc.path;
  rec.scenario_hash = sc.hash;
  rec.seed = sc.seed;
  rec.subcommand = subcommand;

  fs::create_directories(sc.out_dir);
  const std::string dir = sc.out_dir;

  if (subcommand == "check-ds") {
    pipeline_check_ds(sc, dir, rec);
  } else if (subcommand == "converge") {
    pipeline_converge(sc, dir, rec);
  } else if (subcommand == "maximal") {
    pipeline_maximal(sc, dir, rec);
  } else if (subcommand == "weights") {
    pipeline_weights(sc, dir, rec);
  } else if (subcommand == "rearrange") {
    pipeline_rearrange(sc, dir, rec);
  } else if (subcommand == "all") {
    pipeline_check_ds(sc, dir, rec);
    pipeline_converge(sc, dir, rec);
    pipeline_maximal(sc, dir, rec);
    pipeline_weights(sc, dir, rec);
    pipeline_rearrange(sc, dir, rec);
  } else {
    throw std::invalid_argument("unknown subcommand: " + subcommand);
  }

  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
  write_run_record(dir, rec);
  return rec;
}

std::vector<RunRecord> run_suite(const std::string& subcommand, const std::string& suite_dir,
                                 const ScenarioOverrides& overrides, int threads,
                                 const std::string& out_root) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(suite_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".scn")
      files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no .scn scenarios under " + suite_dir);

  std::vector<RunRecord> records(files.size());
  std::vector<std::string> errors(files.size());
  std::size_t next = 0;
  std::mutex mtx;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(mtx);
        if (next >= files.size()) return;
        i = next++;
      }
      try {
        ScenarioOverrides local = overrides;
        local.out_dir = out_root + "/" + fs::path(files[i]).stem().string();
        Scenario sc = load_scenario(files[i], local);
        records[i] = run_scenario(subcommand, sc);
      } catch (const std::exception& ex) {
        errors[i] = ex.what();
        records[i].scenario_path = files[i];
        records[i].subcommand = subcommand;
        records[i].verdicts.push_back({"configuration", false, false, ex.what()});
      }
    }
  };
  const int nthreads = std::max(1, threads);
  std::vector<std::thread> pool;
  for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();

  fs::create_directories(out_root);
  CsvWriter csv(out_root + "/summary.csv",
                {"scenario", "hash", "seed", "checks", "hard_pass", "strict_pass"});
  for (const RunRecord& rec : records) {
    csv.field(rec.scenario_path)
        .field(rec.scenario_hash)
        .field(static_cast<long long>(rec.seed))
        .field(static_cast<long long>(rec.verdicts.size()))
        .field(rec.hard_pass())
        .field(rec.strict_pass());
    csv.end_row();
  }
  return records;
}

int exit_code_for(const std::vector<RunRecord>& records, bool strict) {
  for (const RunRecord& rec : records) {
    for (const CheckVerdict& v : rec.verdicts) {
      if (v.name == "configuration" && !v.pass) return 2;
      if (!v.pass && (!v.estimate_grade || strict)) return 1;
    }
  }
  return 0;
}

} // namespace ergolab
