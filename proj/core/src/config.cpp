#include "nlstrain/config.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <utility>

#include "nlstrain/error.hpp"

namespace nlstrain {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 7> kCommands{{
    {Command::BoundState, "bound-state"},
    {Command::Kink, "kink"},
    {Command::TrainDiagnostics, "train-diagnostics"},
    {Command::SourceDecay, "source-decay"},
    {Command::EvolveTrain, "evolve-train"},
    {Command::Duhamel, "duhamel"},
    {Command::VerifyAll, "verify-all"},
}};

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::Validation, what); }

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) invalid(where + " must be an object");
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const std::string_view a : allowed) known = known || key == a;
    if (!known) invalid("unknown key '" + key + "' in " + where);
  }
}

double number(const json& j, const char* key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number()) invalid(where + "." + key + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) invalid(where + "." + key + " must be finite");
  return x;
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

long long integer(const json& j, const char* key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) invalid(where + "." + key + " must be an integer");
  return v.get<long long>();
}

std::string string(const json& j, const char* key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_string()) invalid(where + "." + key + " must be a string");
  return v.get<std::string>();
}

void require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) invalid(where + " is missing '" + key + "'");
}

json wave_to_json(const SolitonParam& w) {
  return {{"omega", w.omega}, {"v", w.v}, {"gamma", w.gamma}, {"x0", w.x0}};
}

SolitonParam wave_from_json(const json& j, const std::string& where) {
  check_keys(j, {"omega", "v", "gamma", "x0"}, where);
  require(j, "omega", where);
  require(j, "v", where);
  SolitonParam w;
  w.omega = number(j, "omega", where);
  w.v = number(j, "v", where);
  w.gamma = number_or(j, "gamma", 0.0, where);
  w.x0 = number_or(j, "x0", 0.0, where);
  if (!(w.omega > 0.0)) invalid(where + ".omega must be positive");
  return w;
}

TrainConfig train_from_json(const json& j) {
  const std::string where = "train";
  check_keys(j, {"preset", "waves", "kink"}, where);
  TrainConfig out;
  if (j.contains("preset")) {
    if (j.contains("waves") || j.contains("kink")) invalid("train takes either a preset or waves/kink");
    const json& p = j.at("preset");
    const std::string pw = "train.preset";
    check_keys(p, {"kind", "J", "vbar", "h"}, pw);
    require(p, "kind", pw);
    require(p, "J", pw);
    require(p, "vbar", pw);
    PresetRef ref;
    const std::string kind = string(p, "kind", pw);
    if (kind == "A") {
      ref.kind = PresetKind::A;
    } else if (kind == "B") {
      ref.kind = PresetKind::B;
    } else {
      invalid("train.preset.kind must be \"A\" or \"B\"");
    }
    const long long J = integer(p, "J", pw);
    if (J < 1 || J > 30) invalid("train.preset.J must lie in [1, 30]");
    ref.J = static_cast<int>(J);
    ref.vbar = number(p, "vbar", pw);
    ref.h = number_or(p, "h", 1.0, pw);
    out.preset = ref;
    return out;
  }
  require(j, "waves", where);
  if (!j.at("waves").is_array() || j.at("waves").empty()) invalid("train.waves must be a non-empty array");
  for (std::size_t i = 0; i < j.at("waves").size(); ++i) {
    out.waves.push_back(wave_from_json(j.at("waves")[i], "train.waves[" + std::to_string(i) + "]"));
  }
  if (j.contains("kink")) {
    const json& k = j.at("kink");
    const std::string kw = "train.kink";
    check_keys(k, {"v0", "gamma0", "x0"}, kw);
    KinkWave kink;
    kink.v0 = number_or(k, "v0", 0.0, kw);
    kink.gamma0 = number_or(k, "gamma0", 0.0, kw);
    kink.x0 = number_or(k, "x0", 0.0, kw);
    out.kink = kink;
  }
  return out;
}

json train_to_json(const TrainConfig& t) {
  json out = json::object();
  if (t.preset) {
    out["preset"] = {{"kind", t.preset->kind == PresetKind::A ? "A" : "B"},
                     {"J", t.preset->J},
                     {"vbar", t.preset->vbar},
                     {"h", t.preset->h}};
    return out;
  }
  out["waves"] = json::array();
  for (const auto& w : t.waves) out["waves"].push_back(wave_to_json(w));
  if (t.kink) out["kink"] = {{"v0", t.kink->v0}, {"gamma0", t.kink->gamma0}, {"x0", t.kink->x0}};
  return out;
}

bool needs_train(Command c) {
  return c == Command::TrainDiagnostics || c == Command::SourceDecay || c == Command::EvolveTrain ||
         c == Command::Duhamel;
}

}  // namespace

std::string to_string(Command command) {
  for (const auto& [c, name] : kCommands) {
    if (c == command) return std::string(name);
  }
  return "unknown";
}

Command parse_command(std::string_view name) {
  for (const auto& [c, n] : kCommands) {
    if (n == name) return c;
  }
  invalid("unknown command '" + std::string(name) + "'");
}

json nonlinearity_to_json(const Nonlinearity& nl) {
  json out{{"kind", to_string(nl.kind())}};
  if (nl.kind() == NonlinearityKind::DoublePower) {
    out["alpha"] = nl.alpha();
    out["beta"] = nl.beta();
  } else if (nl.kind() == NonlinearityKind::PurePower) {
    out["alpha"] = nl.alpha();
  }
  out["declared"] = {{"alpha1", nl.alpha1()}, {"alpha2", nl.alpha2()}, {"c0", nl.c0()}};
  return out;
}

Nonlinearity nonlinearity_from_json(const json& j) {
  const std::string where = "nonlinearity";
  require_object(j, where);
  require(j, "kind", where);
  const std::string kind = string(j, "kind", where);
  Nonlinearity nl = Nonlinearity::pure_power(1.0);
  try {
    if (kind == "double_power") {
      check_keys(j, {"kind", "alpha", "beta", "declared"}, where);
      require(j, "alpha", where);
      require(j, "beta", where);
      nl = Nonlinearity::double_power(number(j, "alpha", where), number(j, "beta", where));
    } else if (kind == "pure_power") {
      check_keys(j, {"kind", "alpha", "declared"}, where);
      require(j, "alpha", where);
      nl = Nonlinearity::pure_power(number(j, "alpha", where));
    } else if (kind == "sine_example") {
      check_keys(j, {"kind", "declared"}, where);
      nl = Nonlinearity::sine_example();
    } else {
      invalid("nonlinearity.kind must be double_power, pure_power or sine_example");
    }
    if (j.contains("declared")) {
      const json& d = j.at("declared");
      const std::string dw = "nonlinearity.declared";
      check_keys(d, {"alpha1", "alpha2", "c0"}, dw);
      nl = nl.with_declared(number_or(d, "alpha1", nl.alpha1(), dw), number_or(d, "alpha2", nl.alpha2(), dw),
                            number_or(d, "c0", nl.c0(), dw));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) invalid(e.what());
    throw;
  }
  return nl;
}

json to_json(const RunConfig& c) {
  json out{{"command", to_string(c.command)},
           {"nonlinearity", nonlinearity_to_json(c.nl)},
           {"omega", c.omega},
           {"d", c.d},
           {"T", c.T},
           {"dt", c.dt},
           {"dt_q", c.dt_q},
           {"sample_times", c.sample_times},
           {"iterations", c.iterations},
           {"output_dir", c.output_dir}};
  if (c.train) out["train"] = train_to_json(*c.train);
  if (c.grid) out["grid"] = {{"L", c.grid->L}, {"N", c.grid->N}};
  if (c.frame_velocity) out["frame_velocity"] = *c.frame_velocity;
  return out;
}

RunConfig run_config_from_json(const json& j) {
  const std::string where = "config";
  check_keys(j,
             {"command", "nonlinearity", "omega", "d", "train", "grid", "T", "dt", "dt_q", "sample_times", "iterations",
              "frame_velocity", "output_dir"},
             where);
  RunConfig c;
  require(j, "command", where);
  c.command = parse_command(string(j, "command", where));
  if (j.contains("nonlinearity")) c.nl = nonlinearity_from_json(j.at("nonlinearity"));
  c.omega = number_or(j, "omega", c.omega, where);
  if (j.contains("d")) c.d = static_cast<int>(integer(j, "d", where));
  if (j.contains("train")) c.train = train_from_json(j.at("train"));
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, {"L", "N"}, "grid");
    require(g, "L", "grid");
    require(g, "N", "grid");
    const long long n = integer(g, "N", "grid");
    if (n < 4 || !is_power_of_two(static_cast<std::size_t>(n))) invalid("grid.N must be a power of two >= 4");
    c.grid = GridConfig{number(g, "L", "grid"), static_cast<std::size_t>(n)};
    if (!(c.grid->L > 0.0)) invalid("grid.L must be positive");
  }
  c.T = number_or(j, "T", c.T, where);
  c.dt = number_or(j, "dt", c.dt, where);
  c.dt_q = number_or(j, "dt_q", c.dt_q, where);
  if (j.contains("sample_times")) {
    const json& s = j.at("sample_times");
    if (!s.is_array()) invalid("config.sample_times must be an array");
    for (const json& t : s) {
      if (!t.is_number()) invalid("config.sample_times must hold numbers");
      c.sample_times.push_back(t.get<double>());
    }
  }
  if (j.contains("iterations")) {
    const long long it = integer(j, "iterations", where);
    if (it < 2 || it > 64) invalid("config.iterations must lie in [2, 64]");
    c.iterations = static_cast<std::size_t>(it);
  }
  if (j.contains("frame_velocity")) c.frame_velocity = number(j, "frame_velocity", where);
  if (j.contains("output_dir")) c.output_dir = string(j, "output_dir", where);

  if (c.output_dir.empty()) invalid("config.output_dir must not be empty");
  if (!(c.T > 0.0)) invalid("config.T must be positive");
  if (!(c.dt > 0.0)) invalid("config.dt must be positive");
  if (!(c.dt_q > 0.0)) invalid("config.dt_q must be positive");
  for (const double t : c.sample_times) {
    if (!std::isfinite(t) || t < 0.0 || t > c.T) invalid("config.sample_times must lie in [0, T]");
  }
  if (c.command == Command::BoundState) {
    if (!(c.omega > 0.0)) invalid("config.omega must be positive");
    if (c.d < 1 || c.d > 3) invalid("config.d must be 1, 2 or 3");
  }
  if (needs_train(c.command) && !c.train) invalid("command " + to_string(c.command) + " needs a train");
  return c;
}

RunConfig parse_run_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    invalid(std::string("config is not valid JSON: ") + e.what());
  }
  return run_config_from_json(j);
}

TrainSpec train_spec(const RunConfig& config) {
  if (!config.train) invalid("config has no train");
  const TrainConfig& t = *config.train;
  try {
    if (t.preset) return preset(t.preset->kind, t.preset->J, t.preset->vbar, t.preset->h, config.nl);
    return make_train_spec(config.nl, t.waves, t.kink);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) invalid(e.what());
    throw;
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash(const RunConfig& config) {
  json canonical = to_json(config);
  canonical.erase("output_dir");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical.dump())));
  return buf;
}

}  // namespace nlstrain
