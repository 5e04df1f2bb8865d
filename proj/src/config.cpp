#include "dasdn/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "dasdn/io/keyvalue.hpp"
#include "dasdn/random.hpp"

namespace dasdn {

namespace {

struct Entry {
  const char* section;
  const char* key;
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

std::string show(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

template <class T>
T parse_unsigned(const std::string& v, const std::string& where) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw FormatError(where + " expects a non-negative integer, got '" + v + "'");
  }
  return out;
}

double parse_real(const std::string& v, const std::string& where) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw FormatError(where + " expects a number, got '" + v + "'");
  }
  return out;
}

std::vector<Entry> entries(RunConfig& c, const std::string& where) {
  auto real = [&where](double& field) {
    return std::pair{std::function<void(const std::string&)>([&field, where](const std::string& v) {
                       field = parse_real(v, where);
                     }),
                     std::function<std::string()>([&field] { return show(field); })};
  };
  auto size = [&where](std::size_t& field) {
    return std::pair{std::function<void(const std::string&)>([&field, where](const std::string& v) {
                       field = parse_unsigned<std::size_t>(v, where);
                     }),
                     std::function<std::string()>([&field] { return std::to_string(field); })};
  };
  auto make = [](const char* s, const char* k, auto p) { return Entry{s, k, std::move(p.first), std::move(p.second)}; };

  std::vector<Entry> e;
  e.push_back({"run", "seed", [&c, where](const std::string& v) { c.seed = parse_unsigned<std::uint64_t>(v, where); },
               [&c] { return std::to_string(c.seed); }});
  e.push_back({"run", "threads",
               [&c, where](const std::string& v) { c.threads = static_cast<int>(parse_unsigned<unsigned>(v, where)); },
               [&c] { return std::to_string(c.threads); }});

  e.push_back({"model", "spec", [&c](const std::string& v) { c.model_spec = v.empty() ? std::nullopt : std::optional<std::filesystem::path>(v); },
               [&c] { return c.model_spec ? c.model_spec->string() : std::string(); }});
  e.push_back(make("model", "width", size(c.model_width)));
  e.push_back(make("model", "depth", size(c.model_depth)));

  e.push_back(make("simulation", "f0", real(c.source.f0)));
  e.push_back(make("simulation", "source_x", real(c.source.x)));
  e.push_back(make("simulation", "source_z", real(c.source.z)));
  e.push_back({"simulation", "t0",
               [&c, where](const std::string& v) {
                 c.source.t0 = v == "auto" ? std::nullopt : std::optional<double>(parse_real(v, where));
               },
               [&c] { return c.source.t0 ? show(*c.source.t0) : std::string("auto"); }});
  e.push_back(make("simulation", "amplitude", real(c.source.amplitude)));
  e.push_back(make("simulation", "dt_out", real(c.sim.dt_out)));
  e.push_back(make("simulation", "nt_out", size(c.sim.nt_out)));
  e.push_back(make("simulation", "substeps", size(c.sim.substeps)));
  e.push_back(make("simulation", "sponge_width", size(c.sim.sponge.width)));
  e.push_back(make("simulation", "sponge_damping", real(c.sim.sponge.damping)));
  e.push_back({"simulation", "recording",
               [&c, where](const std::string& v) {
                 if (v == "strain-rate") {
                   c.sim.recording = wavesim::Recording::strain_rate;
                 } else if (v == "particle-velocity") {
                   c.sim.recording = wavesim::Recording::particle_velocity;
                 } else {
                   throw ConfigError(where + " must be strain-rate or particle-velocity, got '" + v + "'");
                 }
               },
               [&c] {
                 return std::string(c.sim.recording == wavesim::Recording::strain_rate ? "strain-rate"
                                                                                        : "particle-velocity");
               }});

  e.push_back(make("noise", "target_snr", real(c.target_snr)));
  e.push_back(make("noise", "lowpass_hz", real(c.random.lowpass_hz)));
  e.push_back(make("noise", "trace_prob", real(c.erratic.trace_prob)));
  e.push_back(make("noise", "burst_prob", real(c.erratic.burst_prob)));
  e.push_back(make("noise", "burst_min", size(c.erratic.burst_min)));
  e.push_back(make("noise", "burst_max", size(c.erratic.burst_max)));
  e.push_back(make("noise", "k", real(c.erratic.k)));
  e.push_back(make("noise", "tail_index", real(c.erratic.tail_index)));
  e.push_back(make("noise", "synthetic_fraction", real(c.synthetic_fraction)));
  e.push_back(make("noise", "external_fraction", real(c.external_fraction)));
  e.push_back({"noise", "pool", [&c](const std::string& v) { c.noise_pool = v.empty() ? std::nullopt : std::optional<std::filesystem::path>(v); },
               [&c] { return c.noise_pool ? c.noise_pool->string() : std::string(); }});

  e.push_back(make("patching", "size", size(c.patch.size)));
  e.push_back(make("patching", "overlap", size(c.patch.overlap)));
  e.push_back(make("patching", "train_overlap", size(c.train_overlap)));

  e.push_back({"training", "preset",
               [&c, where](const std::string& v) {
                 if (v != "synthetic" && v != "field") {
                   throw ConfigError(where + " must be synthetic or field, got '" + v + "'");
                 }
                 c.preset = v;
               },
               [&c] { return c.preset; }});
  e.push_back(make("training", "epochs", size(c.train.epochs)));
  e.push_back(make("training", "batch_size", size(c.train.batch_size)));
  e.push_back(make("training", "alpha", real(c.train.huber.alpha)));
  e.push_back(make("training", "lr", real(c.train.adam.lr)));
  e.push_back(make("training", "beta1", real(c.train.adam.beta1)));
  e.push_back(make("training", "beta2", real(c.train.adam.beta2)));
  e.push_back(make("training", "eps", real(c.train.adam.eps)));
  e.push_back(make("training", "dropout", real(c.unit.dropout)));
  e.push_back(make("training", "leaky_slope", real(c.unit.lambda)));

  e.push_back(make("baselines", "f_lo", real(c.bandpass.f_lo)));
  e.push_back(make("baselines", "f_hi", real(c.bandpass.f_hi)));
  e.push_back(make("baselines", "taper", real(c.bandpass.taper)));
  e.push_back(make("baselines", "median_time", size(c.median.time_len)));
  e.push_back(make("baselines", "median_channel", size(c.median.channel_len)));
  return e;
}

}  // namespace

RunConfig RunConfig::benchmark() {
  RunConfig c;
  c.patch.overlap = 24;
  c.train_overlap = 36;
  c.unit.dropout = 0.0;
  return c;
}

void RunConfig::set(const std::string& section, const std::string& key, const std::string& value,
                    const std::string& origin) {
  const std::string where = origin + ": " + section + "." + key;
  bool known_section = false;
  for (auto& e : entries(*this, where)) {
    if (section != e.section) continue;
    known_section = true;
    if (key == e.key) {
      e.set(value);
      return;
    }
  }
  if (!known_section) throw ConfigError(origin + ": unknown section [" + section + "]");
  throw ConfigError(origin + ": unknown key '" + key + "' in section [" + section + "]");
}

void RunConfig::set_assignment(const std::string& assignment, const std::string& origin) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw UsageError(origin + ": expected section.key=value, got '" + assignment + "'");
  }
  set(assignment.substr(0, dot), assignment.substr(dot + 1, eq - dot - 1), assignment.substr(eq + 1), origin);
}

void RunConfig::load_file(const std::filesystem::path& path) {
  for (const auto& sec : io::load_sections(path)) {
    if (sec.name.empty()) {
      throw ConfigError(path.string() + ":" + std::to_string(sec.entries.front().line) +
                        ": setting outside any [section]");
    }
    for (const auto& kv : sec.entries) {
      set(sec.name, kv.key, kv.value, path.string() + ":" + std::to_string(kv.line));
    }
  }
}

void RunConfig::apply_environment() {
  if (const char* s = std::getenv("DASDN_SEED"); s && *s) set("run", "seed", s, "DASDN_SEED");
  if (const char* s = std::getenv("DASDN_THREADS"); s && *s) set("run", "threads", s, "DASDN_THREADS");
}

void RunConfig::validate() const {
  if (model_width == 0 || model_depth == 0) throw ConfigError("model dimensions must be positive");
  if (!(source.f0 >= wavesim::kF0Min && source.f0 <= wavesim::kF0Max)) {
    throw ConfigError("source frequency must lie in [30, 75] Hz");
  }
  wavesim::validate(sim);
  noise::validate(random);
  noise::validate(erratic);
  noise::validate(mix());
  if (!std::isfinite(target_snr)) throw ConfigError("target S/N must be finite");
  patching::validate(patch);
  patching::validate(training_patch());
  cpunet::validate(network());
  cpunet::validate(train);
  baselines::validate(bandpass);
  baselines::validate(median);
}

cpunet::CPUNetConfig RunConfig::network() const {
  const auto dim = static_cast<Eigen::Index>(patch.size * patch.size);
  auto cfg = preset == "field" ? cpunet::CPUNetConfig::field(dim) : cpunet::CPUNetConfig::synthetic(dim);
  cfg.unit = unit;
  cfg.seed = model_seed();
  return cfg;
}

cpunet::TrainConfig RunConfig::training() const {
  auto t = train;
  t.seed = shuffle_seed();
  return t;
}

std::uint64_t RunConfig::noise_seed() const { return mix_seed(seed, 1); }
std::uint64_t RunConfig::erratic_seed() const { return mix_seed(seed, 2); }
std::uint64_t RunConfig::model_seed() const { return mix_seed(seed, 3); }
std::uint64_t RunConfig::shuffle_seed() const { return mix_seed(seed, 4); }

std::string RunConfig::dump() const {
  auto& self = const_cast<RunConfig&>(*this);  // getters only read
  std::ostringstream out;
  std::string current;
  for (const auto& e : entries(self, "dump")) {
    if (current != e.section) {
      if (!current.empty()) out << '\n';
      current = e.section;
      out << '[' << current << "]\n";
    }
    out << e.key << " = " << e.get() << '\n';
  }
  return out.str();
}

}  // namespace dasdn
