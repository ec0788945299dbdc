#include "openchain/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "openchain/csv.hpp"
#include "openchain/errors.hpp"

namespace openchain {

namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double parse_number(std::string_view key, std::string_view v) {
  const std::string l = lower(v);
  if (l == "inf" || l == "infinity" || l == "markov") return kMarkovLimit;
  double x = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ParseError("key '" + std::string(key) + "': '" + std::string(v) + "' is not a number");
  }
  return x;
}

int parse_int(std::string_view key, std::string_view v) {
  int x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ParseError("key '" + std::string(key) + "': '" + std::string(v) +
                     "' is not an integer");
  }
  return x;
}

double parse_rate(std::string_view key, std::string_view v) {
  const double x = parse_number(key, v);
  if (std::isinf(x) && key.front() == 'G') {
    throw ParseError("key '" + std::string(key) + "' must be finite");
  }
  return x;
}

std::string value_token(double v) {
  if (is_markov_limit(v)) return "inf";
  return format_double(v);
}

ChainConfig neel6(double delta) {
  ChainConfig c;
  c.N = 6;
  c.n = 2;
  c.delta = delta;
  c.init = InitialState::Neel;
  c.dt = 5e-3;
  c.sample_every = 20;
  return c;
}

ChainConfig zeros7(double delta) {
  ChainConfig c = neel6(delta);
  c.N = 7;
  c.n = 1;
  c.init = InitialState::AllZeros;
  return c;
}

ChainConfig with(ChainConfig c, Channel ch, double gamma, double t_max) {
  c.channel = ch;
  c.gamma = {gamma, gamma};
  c.t_max = t_max;
  if (ch == Channel::None) {
    // RK4 is not norm preserving; the closed runs need a finer step to keep
    // the norm within 1e-8 over the whole horizon.
    c.Gamma = {0.0, 0.0};
    c.dt = 5e-4;
    c.sample_every = 200;
  }
  // Slow dephasing baths push the generator's positivity loss to a few 1e-4.
  if (ch == Channel::Dephasing && gamma < 5.0) c.positivity_guard = 1e-3;
  return c;
}

std::string chain_label(double delta) { return delta == 0.0 ? "XX" : "XXZ"; }

std::string channel_label(Channel ch) {
  switch (ch) {
    case Channel::None: return "no bath";
    case Channel::Dephasing: return "L=sigma^z";
    case Channel::Dissipation: return "L=sigma^-";
  }
  return "";
}

std::string gamma_label(double g) { return is_markov_limit(g) ? "gamma=inf" : "gamma=" + value_token(g); }

std::vector<ExperimentPreset> build_catalog() {
  std::vector<ExperimentPreset> cat;
  auto add = [&](std::string name, std::string quantity, ChainConfig cfg, std::string what) {
    ExperimentPreset p;
    p.name = std::move(name);
    p.quantity = std::move(quantity);
    p.base = cfg;
    p.description = std::move(what);
    cat.push_back(std::move(p));
  };

  // fig2-fig11 use the XXZ chain (delta = 1); fig12-fig17 repeat fig2-fig7 with delta = 0.
  for (const int offset : {0, 10}) {
    const double delta = offset == 0 ? 1.0 : 0.0;
    const std::string chain = chain_label(delta);
    auto fig = [&](int n) { return "fig" + std::to_string(n + offset); };

    const Channel trio[] = {Channel::None, Channel::Dissipation, Channel::Dephasing};
    for (int i = 0; i < 3; ++i) {
      const std::string panel(1, static_cast<char>('a' + i));
      const ChainConfig c = with(neel6(delta), trio[i], 5.0, 60.0);
      add(fig(2) + panel, "TMI", c, chain + " TMI, Neel, " + channel_label(trio[i]));
      add(fig(3) + panel, "TLN", c, chain + " TLN, Neel, " + channel_label(trio[i]));
    }

    const ChainConfig closed = with(zeros7(delta), Channel::None, 5.0, 200.0);
    add(fig(4) + "a", "TMI", closed, chain + " TMI, all zeros, no bath");
    add(fig(4) + "b", "TLN", closed, chain + " TLN, all zeros, no bath");
    const ChainConfig dz = with(zeros7(delta), Channel::Dephasing, 5.0, 200.0);
    const ChainConfig dm = with(zeros7(delta), Channel::Dissipation, 5.0, 200.0);
    add(fig(5) + "a", "TMI", dz, chain + " TMI, all zeros, L=sigma^z");
    add(fig(5) + "b", "TLN", dz, chain + " TLN, all zeros, L=sigma^z");
    add(fig(5) + "c", "TMI", dm, chain + " TMI, all zeros, L=sigma^-");
    add(fig(5) + "d", "TLN", dm, chain + " TLN, all zeros, L=sigma^-");

    const double gammas[] = {1.0, 2.0, kMarkovLimit};
    for (int i = 0; i < 3; ++i) {
      const std::string panel(1, static_cast<char>('a' + i));
      const ChainConfig c = with(neel6(delta), Channel::Dephasing, gammas[i], 200.0);
      add(fig(6) + panel, "TMI", c, chain + " TMI, Neel, L=sigma^z, " + gamma_label(gammas[i]));
      add(fig(7) + panel, "TLN", c, chain + " TLN, Neel, L=sigma^z, " + gamma_label(gammas[i]));
    }
  }

  const double gammas[] = {1.0, 2.0, kMarkovLimit};
  for (int i = 0; i < 3; ++i) {
    const std::string panel(1, static_cast<char>('a' + i));
    const ChainConfig c = with(neel6(1.0), Channel::Dissipation, gammas[i], 60.0);
    add("fig8" + panel, "TMI", c, "XXZ TMI, Neel, L=sigma^-, " + gamma_label(gammas[i]));
    add("fig9" + panel, "TLN", c, "XXZ TLN, Neel, L=sigma^-, " + gamma_label(gammas[i]));
  }
  for (int i = 0; i < 3; ++i) {
    const ChainConfig c = with(zeros7(1.0), Channel::Dephasing, gammas[i], 200.0);
    add("fig10" + std::string(1, static_cast<char>('a' + i)), "TMI", c,
        "XXZ TMI, all zeros, L=sigma^z, " + gamma_label(gammas[i]));
    add("fig10" + std::string(1, static_cast<char>('d' + i)), "TLN", c,
        "XXZ TLN, all zeros, L=sigma^z, " + gamma_label(gammas[i]));
  }
  for (int i = 0; i < 3; ++i) {
    ChainConfig c = with(zeros7(1.0), Channel::Dephasing, 5.0, 200.0);
    c.n = i + 1;
    add("fig11" + std::string(1, static_cast<char>('a' + i)), "TMI", c,
        "XXZ TMI, all zeros, L=sigma^z, n=" + std::to_string(i + 1));
    add("fig11" + std::string(1, static_cast<char>('d' + i)), "TLN", c,
        "XXZ TLN, all zeros, L=sigma^z, n=" + std::to_string(i + 1));
  }

  // Panel ordering: by figure number, then panel letter.
  auto key = [](const std::string& name) {
    std::size_t i = 3;
    int fig = 0;
    while (i < name.size() && std::isdigit(static_cast<unsigned char>(name[i]))) {
      fig = fig * 10 + (name[i] - '0');
      ++i;
    }
    return std::make_pair(fig, name.substr(i));
  };
  std::sort(cat.begin(), cat.end(), [&](const ExperimentPreset& a, const ExperimentPreset& b) {
    return key(a.name) < key(b.name);
  });

  auto family = [&](std::string name, std::string what, ChainConfig base, SweepAxis axis,
                    std::vector<double> values) {
    ExperimentPreset p;
    p.name = std::move(name);
    p.description = std::move(what);
    p.quantity = "TMI";
    base.positivity_guard = 1e-3;
    p.base = base;
    p.sweep = SweepSpec{axis, std::move(values)};
    cat.push_back(std::move(p));
  };
  const std::vector<double> g3{1.0, 2.0, kMarkovLimit};
  family("fig6-7-gamma", "XXZ, Neel, L=sigma^z, gamma sweep",
         with(neel6(1.0), Channel::Dephasing, 5.0, 200.0), SweepAxis::gamma, g3);
  family("fig8-9-gamma", "XXZ, Neel, L=sigma^-, gamma sweep",
         with(neel6(1.0), Channel::Dissipation, 5.0, 60.0), SweepAxis::gamma, g3);
  family("fig10-gamma", "XXZ, all zeros, L=sigma^z, gamma sweep",
         with(zeros7(1.0), Channel::Dephasing, 5.0, 200.0), SweepAxis::gamma, g3);
  family("fig11-n", "XXZ, all zeros, L=sigma^z, size of C",
         with(zeros7(1.0), Channel::Dephasing, 5.0, 200.0), SweepAxis::n, {1.0, 2.0, 3.0});
  family("fig16-17-gamma", "XX, Neel, L=sigma^z, gamma sweep",
         with(neel6(0.0), Channel::Dephasing, 5.0, 200.0), SweepAxis::gamma, g3);
  family("coupling-Gamma", "XXZ, Neel, L=sigma^z, coupling strength sweep",
         with(neel6(1.0), Channel::Dephasing, 5.0, 60.0), SweepAxis::Gamma, {0.25, 0.5, 1.0});
  return cat;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Runs every job on up to `jobs` threads; rethrows the first failure after
// all workers stop.
void run_pool(std::size_t count, int jobs, const std::function<void(std::size_t)>& job) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::mutex mu;
  std::exception_ptr failure;
  std::size_t next = 0;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (failure || next >= count) return;
          i = next++;
        }
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string summary_csv(const std::string& axis, const std::vector<double>& values,
                        const std::vector<RunSummary>& rows, const std::vector<std::string>& files) {
  std::string text = axis +
                     ",min_TMI,min_TLN,tln_extinction_time,steady_TMI,steady_time,steady_reached,"
                     "file\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RunSummary& r = rows[i];
    text += value_token(values[i]) + ',' + format_double(r.min_TMI) + ',' +
            format_double(r.min_TLN) + ',' + format_double(r.tln_extinction_time) + ',' +
            format_double(r.steady_TMI) + ',' + format_double(r.steady_time) + ',' +
            (r.steady_reached ? "1" : "0") + ',' + files[i] + '\n';
  }
  return text;
}

// Shared tail of run_preset / sweep / rerun: manifest first, then the runs.
RunManifest execute(RunManifest m, int jobs) {
  std::filesystem::create_directories(m.outdir);
  write_text(m.outdir / "manifest.json", manifest_to_json(m));
  std::vector<RunSummary> rows(m.configs.size());
  run_pool(m.configs.size(), jobs, [&](std::size_t i) {
    const TrajectoryRecord rec = evolve(m.configs[i]);
    write_csv(rec, m.outdir / m.outputs[i]);
    rows[i] = summarize(rec);
  });
  if (m.sweep) {
    write_text(m.outdir / m.summary,
               summary_csv(to_string(m.sweep->axis), m.sweep->values, rows, m.outputs));
  }
  return m;
}

RunManifest plan_sweep(const ChainConfig& base, SweepAxis axis, const std::vector<double>& values,
                       const std::filesystem::path& outdir, const RunOptions& options,
                       const std::string& stem, double sample_interval) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  RunManifest m;
  m.outdir = outdir;
  m.seed = options.seed;
  m.timestamp = utc_timestamp();
  m.version = OPENCHAIN_VERSION;
  m.sweep = SweepSpec{axis, values};
  m.summary = stem + "_summary.csv";
  // All-or-nothing: every derived config must validate before any run.
  for (double v : values) {
    ChainConfig c = with_overrides(apply_axis(base, axis, v), options, sample_interval);
    validate(c);
    m.configs.push_back(c);
    m.outputs.push_back(stem + "_" + to_string(axis) + "=" + value_token(v) + ".csv");
  }
  return m;
}

}  // namespace

ChainConfig parse_config(std::string_view text) {
  ChainConfig cfg;
  std::map<std::string, int> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) throw ParseError("key '" + key + "' has no value");
    if (seen[key]++) throw ParseError("key '" + key + "' given twice");

    if (key == "N") {
      cfg.N = parse_int(key, value);
    } else if (key == "n") {
      cfg.n = parse_int(key, value);
    } else if (key == "J") {
      cfg.J = parse_number(key, value);
    } else if (key == "delta") {
      cfg.delta = parse_number(key, value);
    } else if (key == "channel") {
      const std::string v = lower(value);
      if (v == "none") {
        cfg.channel = Channel::None;
      } else if (v == "dephasing" || v == "sigmaz") {
        cfg.channel = Channel::Dephasing;
      } else if (v == "dissipation" || v == "sigma-" || v == "sigmaminus") {
        cfg.channel = Channel::Dissipation;
      } else {
        throw ParseError("channel must be none, dephasing or dissipation (got '" +
                         std::string(value) + "')");
      }
    } else if (key == "Gamma") {
      cfg.Gamma[0] = cfg.Gamma[1] = parse_rate(key, value);
    } else if (key == "Gamma1") {
      cfg.Gamma[0] = parse_rate(key, value);
    } else if (key == "Gamma2") {
      cfg.Gamma[1] = parse_rate(key, value);
    } else if (key == "gamma") {
      cfg.gamma[0] = cfg.gamma[1] = parse_rate(key, value);
    } else if (key == "gamma1") {
      cfg.gamma[0] = parse_rate(key, value);
    } else if (key == "gamma2") {
      cfg.gamma[1] = parse_rate(key, value);
    } else if (key == "init") {
      const std::string v = lower(value);
      if (v == "neel") {
        cfg.init = InitialState::Neel;
      } else if (v == "allzeros" || v == "zeros") {
        cfg.init = InitialState::AllZeros;
      } else {
        throw ParseError("init must be neel or allzeros (got '" + std::string(value) + "')");
      }
    } else if (key == "t_max") {
      cfg.t_max = parse_number(key, value);
    } else if (key == "dt") {
      cfg.dt = parse_number(key, value);
    } else if (key == "sample_every") {
      cfg.sample_every = parse_int(key, value);
    } else if (key == "positivity_guard") {
      cfg.positivity_guard = parse_number(key, value);
    } else {
      throw ParseError("unknown key '" + key + "'");
    }
  }
  if ((seen.count("Gamma") && (seen.count("Gamma1") || seen.count("Gamma2"))) ||
      (seen.count("gamma") && (seen.count("gamma1") || seen.count("gamma2")))) {
    throw ParseError("give either the shared rate or the per-bath rates, not both");
  }
  validate(cfg);
  return cfg;
}

std::string format_config(const ChainConfig& cfg) {
  std::string out;
  auto put = [&](const std::string& k, const std::string& v) { out += k + "=" + v + "\n"; };
  put("N", std::to_string(cfg.N));
  put("n", std::to_string(cfg.n));
  put("J", format_double(cfg.J));
  put("delta", format_double(cfg.delta));
  put("channel", to_string(cfg.channel));
  put("Gamma1", format_double(cfg.Gamma[0]));
  put("Gamma2", format_double(cfg.Gamma[1]));
  put("gamma1", value_token(cfg.gamma[0]));
  put("gamma2", value_token(cfg.gamma[1]));
  put("init", to_string(cfg.init));
  put("t_max", format_double(cfg.t_max));
  put("dt", format_double(cfg.dt));
  put("sample_every", std::to_string(cfg.sample_every));
  put("positivity_guard", format_double(cfg.positivity_guard));
  return out;
}

SweepAxis parse_axis(std::string_view name) {
  if (name == "Gamma") return SweepAxis::Gamma;
  if (name == "gamma") return SweepAxis::gamma;
  if (name == "n") return SweepAxis::n;
  if (name == "N") return SweepAxis::N;
  if (name == "delta") return SweepAxis::delta;
  throw ConfigError("unknown sweep axis '" + std::string(name) +
                    "' (expected gamma, Gamma, n, N or delta)");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Gamma: return "Gamma";
    case SweepAxis::gamma: return "gamma";
    case SweepAxis::n: return "n";
    case SweepAxis::N: return "N";
    case SweepAxis::delta: return "delta";
  }
  return "";
}

ChainConfig apply_axis(ChainConfig base, SweepAxis axis, double value) {
  auto as_int = [&](const char* what) {
    if (!(std::abs(value) < 1e6) || value != std::round(value)) {
      throw ConfigError(std::string(what) + " sweep values must be integers");
    }
    return static_cast<int>(value);
  };
  switch (axis) {
    case SweepAxis::Gamma: base.Gamma = {value, value}; break;
    case SweepAxis::gamma: base.gamma = {value, value}; break;
    case SweepAxis::n: base.n = as_int("n"); break;
    case SweepAxis::N: base.N = as_int("N"); break;
    case SweepAxis::delta: base.delta = value; break;
  }
  return base;
}

std::vector<ChainConfig> ExperimentPreset::configs() const {
  if (!sweep) return {base};
  std::vector<ChainConfig> out;
  for (double v : sweep->values) out.push_back(apply_axis(base, sweep->axis, v));
  return out;
}

const std::vector<ExperimentPreset>& preset_catalog() {
  static const std::vector<ExperimentPreset> catalog = build_catalog();
  return catalog;
}

const ExperimentPreset& find_preset(std::string_view name) {
  for (const auto& p : preset_catalog()) {
    if (p.name == name) return p;
  }
  std::string names;
  for (const auto& p : preset_catalog()) names += (names.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown preset '" + std::string(name) + "'; valid presets: " + names);
}

RunSummary summarize(const TrajectoryRecord& record) {
  if (record.empty()) throw ConfigError("summarize: empty record");
  const auto& s = record.samples;
  RunSummary r;
  std::size_t argmin_tln = 0;
  r.min_TMI = s[0].TMI;
  r.min_TLN = s[0].TLN;
  for (std::size_t i = 0; i < s.size(); ++i) {
    r.min_TMI = std::min(r.min_TMI, s[i].TMI);
    if (s[i].TLN < r.min_TLN) {
      r.min_TLN = s[i].TLN;
      argmin_tln = i;
    }
  }

  r.tln_extinction_time = std::numeric_limits<double>::quiet_NaN();
  std::size_t tail = s.size();
  while (tail > 0 && std::abs(s[tail - 1].TLN) < kExtinctionThreshold) --tail;
  if (tail < s.size()) r.tln_extinction_time = s[std::max(tail, argmin_tln)].t;

  const double t_end = s.back().t;
  for (std::size_t i = 0; i < s.size() && s[i].t + kSteadyWindow <= t_end + 1e-9; ++i) {
    double lo = s[i].TMI;
    double hi = s[i].TMI;
    for (std::size_t k = i; k < s.size() && s[k].t <= s[i].t + kSteadyWindow + 1e-9; ++k) {
      lo = std::min(lo, s[k].TMI);
      hi = std::max(hi, s[k].TMI);
    }
    if (hi - lo < kSteadyTolerance) {
      r.steady_reached = true;
      r.steady_time = s[i].t;
      r.steady_TMI = s[i].TMI;
      return r;
    }
  }
  double sum = 0.0;
  int count = 0;
  for (const auto& x : s) {
    if (x.t >= t_end - kSteadyWindow - 1e-9) {
      sum += x.TMI;
      ++count;
    }
  }
  r.steady_TMI = sum / count;
  r.steady_time = std::numeric_limits<double>::quiet_NaN();
  return r;
}

ChainConfig with_overrides(ChainConfig cfg, const RunOptions& options, double sample_interval) {
  if (options.t_max) cfg.t_max = *options.t_max;
  if (options.dt) {
    if (!(*options.dt > 0.0)) throw ConfigError("dt must be > 0");
    cfg.dt = *options.dt;
    cfg.sample_every = std::max(1, static_cast<int>(std::lround(sample_interval / cfg.dt)));
  }
  return cfg;
}

std::string manifest_to_json(const RunManifest& m) {
  json j;
  j["software"] = "openchain";
  j["version"] = m.version;
  j["timestamp"] = m.timestamp;
  j["seed"] = m.seed;
  j["preset"] = m.preset;
  j["outdir"] = m.outdir.string();
  j["log_base"] = {{"entropy", "e"}, {"negativity", "2"}};
  json runs = json::array();
  for (std::size_t i = 0; i < m.configs.size(); ++i) {
    const ChainConfig& c = m.configs[i];
    const TimeGrid g = resolve_grid(c);
    runs.push_back({{"output", m.outputs[i]},
                    {"config", format_config(c)},
                    {"resolved_dt", g.dt},
                    {"resolved_steps", g.steps},
                    {"resolved_sample_every", g.sample_every},
                    {"t_max", c.t_max}});
  }
  j["runs"] = runs;
  if (m.sweep) {
    std::vector<std::string> values;
    for (double v : m.sweep->values) values.push_back(value_token(v));
    j["sweep"] = {{"axis", to_string(m.sweep->axis)}, {"values", values}};
    j["summary"] = m.summary;
  }
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  RunManifest m;
  try {
    m.version = j.value("version", "");
    m.timestamp = j.value("timestamp", "");
    m.seed = j.value("seed", std::uint64_t{0});
    m.preset = j.value("preset", "");
    m.outdir = j.value("outdir", "");
    for (const auto& r : j.at("runs")) {
      m.configs.push_back(parse_config(r.at("config").get<std::string>()));
      m.outputs.push_back(r.at("output").get<std::string>());
    }
    if (j.contains("sweep")) {
      SweepSpec s;
      s.axis = parse_axis(j["sweep"].at("axis").get<std::string>());
      for (const auto& v : j["sweep"].at("values")) {
        s.values.push_back(parse_number("sweep value", v.get<std::string>()));
      }
      m.sweep = s;
      m.summary = j.at("summary").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  return m;
}

RunManifest run_config(const ChainConfig& cfg, const std::filesystem::path& outdir,
                       const RunOptions& options, const std::string& stem) {
  RunManifest m;
  m.outdir = outdir;
  m.seed = options.seed;
  m.timestamp = utc_timestamp();
  m.version = OPENCHAIN_VERSION;
  ChainConfig c = with_overrides(cfg, options, cfg.dt * cfg.sample_every);
  validate(c);
  m.configs.push_back(c);
  m.outputs.push_back(stem + ".csv");
  return execute(std::move(m), 1);
}

RunManifest run_preset(std::string_view name, const std::filesystem::path& outdir,
                       const RunOptions& options) {
  const ExperimentPreset& p = find_preset(name);
  if (p.sweep) {
    RunManifest m = plan_sweep(p.base, p.sweep->axis, p.sweep->values, outdir, options, p.name,
                               p.sample_interval);
    m.preset = p.name;
    return execute(std::move(m), options.jobs);
  }
  RunManifest m;
  m.preset = p.name;
  m.outdir = outdir;
  m.seed = options.seed;
  m.timestamp = utc_timestamp();
  m.version = OPENCHAIN_VERSION;
  ChainConfig c = with_overrides(p.base, options, p.sample_interval);
  validate(c);
  m.configs.push_back(c);
  m.outputs.push_back(p.name + ".csv");
  return execute(std::move(m), options.jobs);
}

RunManifest sweep(const ChainConfig& base, SweepAxis axis, const std::vector<double>& values,
                  const std::filesystem::path& outdir, const RunOptions& options,
                  const std::string& stem) {
  RunManifest m = plan_sweep(base, axis, values, outdir, options, stem,
                             base.dt * base.sample_every);
  return execute(std::move(m), options.jobs);
}

RunManifest rerun_manifest(const RunManifest& m, const std::filesystem::path& outdir, int jobs) {
  RunManifest out = m;
  out.outdir = outdir;
  out.timestamp = utc_timestamp();
  out.version = OPENCHAIN_VERSION;
  return execute(std::move(out), jobs);
}

}  // namespace openchain
