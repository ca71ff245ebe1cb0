#include "sclab/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "sclab/power.hpp"

namespace sclab {

ParseError::ParseError(const std::string& message, int line, int column, std::string field)
    : ValidationError(message), line_(line), column_(column), field_(std::move(field)) {}

namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Walks a YAML node keeping the dotted path for error messages.
class Reader {
 public:
  Reader(YAML::Node node, std::string path, std::string source)
      : node_(std::move(node)), path_(std::move(path)), source_(std::move(source)) {}

  [[noreturn]] void Fail(const std::string& what) const { Fail(node_, path_, what); }

  [[noreturn]] void Fail(const YAML::Node& node, const std::string& field, const std::string& what) const {
    const YAML::Mark mark = node.Mark();
    const int line = mark.line + 1, column = mark.column + 1;
    throw ParseError(fmt::format("{}:{}:{}: {}: {}", source_, line, column, field.empty() ? "<root>" : field, what),
                     line, column, field);
  }

  bool IsNull() const { return !node_ || node_.IsNull(); }

  // Rejects keys outside `allowed`; a null node counts as an empty map.
  void ExpectMap(std::initializer_list<std::string_view> allowed) const {
    if (IsNull()) return;
    if (!node_.IsMap()) Fail("expected a mapping");
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        Fail(kv.first, Join(key), "unknown field");
      }
    }
  }

  std::optional<Reader> Child(std::string_view key) const {
    if (IsNull()) return std::nullopt;
    YAML::Node child = node_[std::string(key)];
    if (!child) return std::nullopt;
    return Reader(child, Join(key), source_);
  }

  std::string Scalar() const {
    if (!node_.IsScalar()) Fail("expected a scalar value");
    return node_.Scalar();
  }

  std::uint64_t Unsigned() const {
    const std::string text = Scalar();
    std::string_view digits = text;
    int base = 10;
    if (digits.starts_with("0x") || digits.starts_with("0X")) {
      digits.remove_prefix(2);
      base = 16;
    }
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
      Fail(fmt::format("expected a non-negative integer, got '{}'", text));
    }
    return value;
  }

  std::uint32_t Unsigned32() const {
    const std::uint64_t v = Unsigned();
    if (v > 0xffffffffULL) Fail(fmt::format("value {} does not fit in 32 bits", v));
    return static_cast<std::uint32_t>(v);
  }

  double Real() const {
    try {
      return node_.as<double>();
    } catch (const YAML::Exception&) {
      Fail(fmt::format("expected a number, got '{}'", Scalar()));
    }
  }

  bool Boolean() const {
    try {
      return node_.as<bool>();
    } catch (const YAML::Exception&) {
      Fail(fmt::format("expected a boolean, got '{}'", Scalar()));
    }
  }

  template <typename Enum, std::size_t N>
  Enum Choice(const std::pair<std::string_view, Enum> (&options)[N]) const {
    const std::string value = Lower(Scalar());
    for (const auto& [name, e] : options) {
      if (name == value) return e;
    }
    std::string names;
    for (const auto& [name, e] : options) names += (names.empty() ? "" : ", ") + std::string(name);
    Fail(fmt::format("unknown value '{}' (expected one of: {})", value, names));
  }

  const YAML::Node& node() const { return node_; }
  const std::string& path() const { return path_; }
  const std::string& source() const { return source_; }

 private:
  std::string Join(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }

  YAML::Node node_;
  std::string path_;
  std::string source_;
};

constexpr std::pair<std::string_view, Replacement> kReplacements[] = {
    {"lru", Replacement::kLru}, {"random", Replacement::kRandom}};
constexpr std::pair<std::string_view, Prefetcher> kPrefetchers[] = {
    {"off", Prefetcher::kOff}, {"next_line", Prefetcher::kNextLine}};
constexpr std::pair<std::string_view, IndexMode> kIndexModes[] = {
    {"virtual", IndexMode::kVirtual}, {"physical_identity", IndexMode::kPhysicalIdentity}};
constexpr std::pair<std::string_view, Strategy> kStrategies[] = {
    {"prime_probe", Strategy::kPrimeProbe},
    {"flush_reload", Strategy::kFlushReload},
    {"evict_reload", Strategy::kEvictReload},
    {"flush_flush", Strategy::kFlushFlush}};
constexpr std::pair<std::string_view, VictimKind> kVictimKinds[] = {
    {"modexp", VictimKind::kModExp}, {"modexp_ct", VictimKind::kModExpConstantTime}, {"aes", VictimKind::kAes}};

std::string_view ToString(Replacement r) { return r == Replacement::kLru ? "lru" : "random"; }
std::string_view ToString(Prefetcher p) { return p == Prefetcher::kOff ? "off" : "next_line"; }
std::string_view ToString(IndexMode m) { return m == IndexMode::kVirtual ? "virtual" : "physical_identity"; }

std::string_view ToString(DefenseKind k) {
  switch (k) {
    case DefenseKind::kPartition:
      return "partition";
    case DefenseKind::kRandomize:
      return "randomize";
    case DefenseKind::kConstantTime:
      return "constant_time";
  }
  return "unknown";
}

std::optional<DefenseKind> DefenseKindFromName(std::string_view name) {
  const std::string n = Lower(name);
  if (n == "partition") return DefenseKind::kPartition;
  if (n == "randomize") return DefenseKind::kRandomize;
  if (n == "constant_time") return DefenseKind::kConstantTime;
  return std::nullopt;
}

WayRange ReadWayRange(const Reader& r) {
  if (!r.node().IsSequence() || r.node().size() != 2) r.Fail("expected [begin, end]");
  const Reader begin(r.node()[0], r.path() + "[0]", r.source());
  const Reader end(r.node()[1], r.path() + "[1]", r.source());
  return {begin.Unsigned32(), end.Unsigned32()};
}

void ReadCache(const Reader& r, CacheConfig& c) {
  r.ExpectMap({"num_sets", "ways", "line_size", "replacement", "hit_latency", "miss_latency", "prefetcher",
               "index_mode", "isa"});
  if (auto f = r.Child("num_sets")) c.num_sets = f->Unsigned32();
  if (auto f = r.Child("ways")) c.ways = f->Unsigned32();
  if (auto f = r.Child("line_size")) c.line_size = f->Unsigned32();
  if (auto f = r.Child("replacement")) c.replacement = f->Choice(kReplacements);
  if (auto f = r.Child("hit_latency")) c.hit_latency = f->Unsigned();
  if (auto f = r.Child("miss_latency")) c.miss_latency = f->Unsigned();
  if (auto f = r.Child("prefetcher")) c.prefetcher = f->Choice(kPrefetchers);
  if (auto f = r.Child("index_mode")) c.index_mode = f->Choice(kIndexModes);
  if (auto isa = r.Child("isa")) {
    isa->ExpectMap({"has_line_flush"});
    if (auto f = isa->Child("has_line_flush")) c.isa.has_line_flush = f->Boolean();
  }
}

void ReadVictim(const Reader& r, VictimSettings& v) {
  r.ExpectMap({"kind", "key", "key_bits", "b", "m", "d0", "d1", "target_set", "release_slots"});
  if (auto f = r.Child("kind")) v.kind = f->Choice(kVictimKinds);
  if (auto f = r.Child("key")) v.key = f->Scalar();
  if (auto f = r.Child("key_bits")) v.key_bits = f->Unsigned();
  if (auto f = r.Child("b")) v.base = f->Unsigned();
  if (auto f = r.Child("m")) v.modulus = f->Unsigned();
  if (auto f = r.Child("d0")) v.d0 = f->Unsigned32();
  if (auto f = r.Child("d1")) v.d1 = f->Unsigned32();
  if (auto f = r.Child("target_set")) v.target_set = f->Unsigned32();
  if (auto f = r.Child("release_slots")) v.release_slots = f->Unsigned32();
}

void ReadAttack(const Reader& r, AttackSettings& a) {
  r.ExpectMap({"strategy", "target_sets", "num_slots", "shuffle_probe_order", "shared_address"});
  if (auto f = r.Child("strategy")) a.strategy = f->Choice(kStrategies);
  if (auto f = r.Child("target_sets")) {
    if (f->node().IsScalar()) {
      if (Lower(f->Scalar()) != "all") f->Fail("expected 'all' or a list of set ids");
      a.target_sets.reset();
    } else if (f->node().IsSequence()) {
      std::vector<SetId> sets;
      for (std::size_t i = 0; i < f->node().size(); ++i) {
        sets.push_back(Reader(f->node()[i], fmt::format("{}[{}]", f->path(), i), f->source()).Unsigned32());
      }
      a.target_sets = std::move(sets);
    } else {
      f->Fail("expected 'all' or a list of set ids");
    }
  }
  if (auto f = r.Child("num_slots")) a.num_slots = f->Unsigned();
  if (auto f = r.Child("shuffle_probe_order")) a.shuffle_probe_order = f->Boolean();
  if (auto f = r.Child("shared_address")) {
    if (f->IsNull()) {
      a.shared_address.reset();
    } else {
      a.shared_address = f->Unsigned();
    }
  }
}

void ReadDefenses(const Reader& r, std::vector<DefenseEntry>& out) {
  if (r.IsNull()) return;
  if (!r.node().IsSequence()) r.Fail("expected a list of defenses");
  for (std::size_t i = 0; i < r.node().size(); ++i) {
    const Reader item(r.node()[i], fmt::format("{}[{}]", r.path(), i), r.source());
    DefenseEntry entry;
    if (item.node().IsScalar()) {
      const auto kind = DefenseKindFromName(item.Scalar());
      if (!kind) item.Fail(fmt::format("unknown defense '{}'", item.Scalar()));
      entry.kind = *kind;
    } else if (item.node().IsMap() && item.node().size() == 1) {
      const auto kv = *item.node().begin();
      const std::string name = kv.first.as<std::string>();
      const auto kind = DefenseKindFromName(name);
      if (!kind) item.Fail(kv.first, item.path(), fmt::format("unknown defense '{}'", name));
      entry.kind = *kind;
      const Reader body(kv.second, item.path() + "." + name, item.source());
      switch (entry.kind) {
        case DefenseKind::kPartition:
          body.ExpectMap({"attacker_ways", "victim_ways"});
          if (auto f = body.Child("attacker_ways")) entry.attacker_ways = ReadWayRange(*f);
          if (auto f = body.Child("victim_ways")) entry.victim_ways = ReadWayRange(*f);
          if (entry.attacker_ways.has_value() != entry.victim_ways.has_value()) {
            body.Fail("give both attacker_ways and victim_ways, or neither");
          }
          break;
        case DefenseKind::kRandomize:
          body.ExpectMap({"seed"});
          if (auto f = body.Child("seed")) entry.seed = f->Unsigned();
          break;
        case DefenseKind::kConstantTime:
          body.ExpectMap({});
          break;
      }
    } else {
      item.Fail("expected a defense name or a single-key mapping");
    }
    out.push_back(entry);
  }
}

void ReadSeeds(const Reader& r, ScenarioSeeds& s) {
  r.ExpectMap({"cache", "attack", "noise", "key"});
  if (auto f = r.Child("cache")) s.cache = f->Unsigned();
  if (auto f = r.Child("attack")) s.attack = f->Unsigned();
  if (auto f = r.Child("noise")) s.noise = f->Unsigned();
  if (auto f = r.Child("key")) s.key = f->Unsigned();
}

void ReadPower(const Reader& r, PowerSettings& p) {
  r.ExpectMap({"base_power", "op_weight", "noise_sigma", "masked", "num_traces", "acquisitions", "averaged_traces"});
  if (auto f = r.Child("base_power")) p.base_power = f->Real();
  if (auto f = r.Child("op_weight")) p.op_weight = f->Real();
  if (auto f = r.Child("noise_sigma")) p.noise_sigma = f->Real();
  if (auto f = r.Child("masked")) p.masked = f->Boolean();
  if (auto f = r.Child("num_traces")) p.num_traces = f->Unsigned();
  if (auto f = r.Child("acquisitions")) p.acquisitions = f->Unsigned();
  if (auto f = r.Child("averaged_traces")) p.averaged_traces = f->Unsigned();
}

}  // namespace

VictimKey ResolveKey(const ScenarioConfig& config) {
  const VictimSettings& v = config.victim;
  const std::string text = Lower(v.key);
  if (text == "random") {
    const std::size_t bits = v.key_bits.value_or(v.kind == VictimKind::kAes ? 8 : 32);
    Rng rng(config.seeds.key);
    return VictimKey::Random(bits, rng);
  }
  if (text.starts_with("0b")) {
    VictimKey key = VictimKey::FromBinary(std::string_view(text).substr(2));
    if (v.key_bits && *v.key_bits != key.length()) {
      return VictimKey::FromHex(fmt::format("{:x}", key.value()), *v.key_bits);
    }
    return key;
  }
  return VictimKey::FromHex(text, v.key_bits.value_or(0));
}

DefenseSpec ResolveDefenses(const ScenarioConfig& config) {
  DefenseSpec spec;
  for (const DefenseEntry& d : config.defenses) {
    switch (d.kind) {
      case DefenseKind::kPartition:
        spec.partition = d.attacker_ways ? PartitionPolicy(*d.attacker_ways, *d.victim_ways)
                                         : PartitionPolicy::EvenSplit(config.cache.ways);
        break;
      case DefenseKind::kRandomize:
        spec.randomization = IndexRandomization{d.seed.value_or(DeriveSeed(config.seeds.cache, 0x5e7)), true};
        break;
      case DefenseKind::kConstantTime:
        spec.constant_time = true;
        break;
    }
  }
  return spec;
}

AttackScenario ResolveScenario(const ScenarioConfig& config) {
  AttackScenario s;
  s.cache = config.cache;
  s.victim.kind = config.victim.kind;
  s.victim.key = ResolveKey(config);
  s.victim.base = config.victim.base;
  s.victim.modulus = config.victim.modulus;
  s.victim.durations = {config.victim.d0, config.victim.d1};
  s.victim.target_set = config.victim.target_set;
  s.victim.release_slots = config.victim.release_slots;
  s.attack.strategy = config.attack.strategy;
  s.attack.target_sets = config.attack.target_sets.value_or(AllSets(config.cache));
  s.attack.num_slots = config.attack.num_slots;
  s.attack.shuffle_probe_order = config.attack.shuffle_probe_order;
  s.attack.shared_address = config.attack.shared_address;
  s.attack.rng_seed = config.seeds.attack;
  s.noise_sigma = config.noise_sigma;
  s.seeds = config.seeds;
  return ApplyDefense(std::move(s), ResolveDefenses(config));
}

void ValidateScenarioConfig(const ScenarioConfig& config) {
  try {
    config.cache.Validate();
    const AttackScenario resolved = ResolveScenario(config);
    if (config.victim.kind == VictimKind::kAes && resolved.victim.key.length() != 8) {
      throw InvalidConfig("victim.key: the aes victim needs an 8-bit key byte");
    }
    ValidateScenario(resolved);
    PowerModel{config.power.base_power, config.power.op_weight, config.power.noise_sigma, config.power.masked}
        .Validate();
    if (config.power.num_traces < 2) throw InvalidConfig("power.num_traces must be >= 2");
    if (config.power.acquisitions < 1) throw InvalidConfig("power.acquisitions must be >= 1");
    if (config.power.averaged_traces < 1) throw InvalidConfig("power.averaged_traces must be >= 1");
  } catch (const UnsupportedInstruction& e) {
    throw InvalidConfig(e.what());
  }
}

ScenarioConfig ParseScenarioText(std::string_view text, std::string_view source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(fmt::format("{}:{}:{}: {}", source, e.mark.line + 1, e.mark.column + 1, e.msg),
                     e.mark.line + 1, e.mark.column + 1, "");
  }
  const Reader r(root, "", std::string(source));
  r.ExpectMap({"cache", "victim", "attack", "noise_sigma", "defenses", "seeds", "output_dir", "power"});

  ScenarioConfig config;
  if (auto f = r.Child("cache")) ReadCache(*f, config.cache);
  if (auto f = r.Child("victim")) ReadVictim(*f, config.victim);
  if (auto f = r.Child("attack")) ReadAttack(*f, config.attack);
  if (auto f = r.Child("noise_sigma")) config.noise_sigma = f->Real();
  if (auto f = r.Child("defenses")) ReadDefenses(*f, config.defenses);
  if (auto f = r.Child("seeds")) ReadSeeds(*f, config.seeds);
  if (auto f = r.Child("output_dir")) config.output_dir = f->Scalar();
  if (auto f = r.Child("power")) ReadPower(*f, config.power);

  ValidateScenarioConfig(config);
  return config;
}

ScenarioConfig ParseScenarioFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot read scenario file '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return ParseScenarioText(text.str(), path.string());
}

nlohmann::ordered_json ScenarioToJson(const ScenarioConfig& c) {
  nlohmann::ordered_json j;
  j["cache"] = {{"num_sets", c.cache.num_sets},
                {"ways", c.cache.ways},
                {"line_size", c.cache.line_size},
                {"replacement", ToString(c.cache.replacement)},
                {"hit_latency", c.cache.hit_latency},
                {"miss_latency", c.cache.miss_latency},
                {"prefetcher", ToString(c.cache.prefetcher)},
                {"index_mode", ToString(c.cache.index_mode)},
                {"isa", {{"has_line_flush", c.cache.isa.has_line_flush}}}};
  nlohmann::ordered_json victim = {{"kind", ToString(c.victim.kind)}, {"key", c.victim.key}};
  if (c.victim.key_bits) victim["key_bits"] = *c.victim.key_bits;
  victim["b"] = c.victim.base;
  victim["m"] = c.victim.modulus;
  victim["d0"] = c.victim.d0;
  victim["d1"] = c.victim.d1;
  victim["target_set"] = c.victim.target_set;
  victim["release_slots"] = c.victim.release_slots;
  j["victim"] = victim;
  nlohmann::ordered_json attack = {{"strategy", ToString(c.attack.strategy)}};
  if (c.attack.target_sets) {
    attack["target_sets"] = *c.attack.target_sets;
  } else {
    attack["target_sets"] = "all";
  }
  attack["num_slots"] = c.attack.num_slots;
  attack["shuffle_probe_order"] = c.attack.shuffle_probe_order;
  if (c.attack.shared_address) attack["shared_address"] = *c.attack.shared_address;
  j["attack"] = attack;
  j["noise_sigma"] = c.noise_sigma;
  nlohmann::ordered_json defenses = nlohmann::ordered_json::array();
  for (const DefenseEntry& d : c.defenses) {
    nlohmann::ordered_json body = nlohmann::ordered_json::object();
    if (d.attacker_ways) {
      body["attacker_ways"] = {d.attacker_ways->begin, d.attacker_ways->end};
      body["victim_ways"] = {d.victim_ways->begin, d.victim_ways->end};
    }
    if (d.seed) body["seed"] = *d.seed;
    if (body.empty()) {
      defenses.push_back(ToString(d.kind));
    } else {
      defenses.push_back({{ToString(d.kind), body}});
    }
  }
  j["defenses"] = defenses;
  j["seeds"] = {{"cache", c.seeds.cache}, {"attack", c.seeds.attack}, {"noise", c.seeds.noise}, {"key", c.seeds.key}};
  j["power"] = {{"base_power", c.power.base_power},     {"op_weight", c.power.op_weight},
                {"noise_sigma", c.power.noise_sigma},   {"masked", c.power.masked},
                {"num_traces", c.power.num_traces},     {"acquisitions", c.power.acquisitions},
                {"averaged_traces", c.power.averaged_traces}};
  return j;
}

std::filesystem::path EffectiveOutputDir(const ScenarioConfig& config) {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return config.output_dir;
}

namespace {

std::uint64_t ParseAxisUnsigned(std::string_view axis, std::string_view value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    throw InvalidConfig(fmt::format("sweep axis {}: '{}' is not a non-negative integer", axis, value));
  }
  return v;
}

double ParseAxisReal(std::string_view axis, std::string_view value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(value), &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidConfig(fmt::format("sweep axis {}: '{}' is not a number", axis, value));
}

bool ParseAxisBool(std::string_view axis, std::string_view value) {
  const std::string v = Lower(value);
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw InvalidConfig(fmt::format("sweep axis {}: '{}' is not a boolean", axis, value));
}

template <typename Enum, std::size_t N>
Enum ParseAxisChoice(std::string_view axis, std::string_view value,
                     const std::pair<std::string_view, Enum> (&options)[N]) {
  const std::string v = Lower(value);
  for (const auto& [name, e] : options) {
    if (name == v) return e;
  }
  throw InvalidConfig(fmt::format("sweep axis {}: unknown value '{}'", axis, value));
}

}  // namespace

std::vector<std::string_view> SweepAxes() {
  return {"noise_sigma",  "defense", "shuffle_probe_order", "prefetcher",          "replacement",
          "strategy",     "victim_kind", "d0",               "d1",                  "key_bits",
          "num_slots",    "ways",    "release_slots",       "target_set",          "power.noise_sigma",
          "power.masked", "power.num_traces", "power.acquisitions", "power.averaged_traces"};
}

void ApplySweepValue(ScenarioConfig& c, std::string_view axis, std::string_view value) {
  if (axis == "noise_sigma") {
    c.noise_sigma = ParseAxisReal(axis, value);
  } else if (axis == "defense") {
    c.defenses.clear();
    if (Lower(value) != "none") {
      std::string_view rest = value;
      while (!rest.empty()) {
        const std::size_t plus = rest.find('+');
        const std::string_view name = rest.substr(0, plus);
        const auto kind = DefenseKindFromName(name);
        if (!kind) throw InvalidConfig(fmt::format("sweep axis defense: unknown defense '{}'", name));
        c.defenses.push_back({*kind, std::nullopt, std::nullopt, std::nullopt});
        rest = plus == std::string_view::npos ? std::string_view{} : rest.substr(plus + 1);
      }
    }
  } else if (axis == "shuffle_probe_order") {
    c.attack.shuffle_probe_order = ParseAxisBool(axis, value);
  } else if (axis == "prefetcher") {
    c.cache.prefetcher = ParseAxisChoice(axis, value, kPrefetchers);
  } else if (axis == "replacement") {
    c.cache.replacement = ParseAxisChoice(axis, value, kReplacements);
  } else if (axis == "strategy") {
    c.attack.strategy = ParseAxisChoice(axis, value, kStrategies);
  } else if (axis == "victim_kind") {
    c.victim.kind = ParseAxisChoice(axis, value, kVictimKinds);
  } else if (axis == "d0") {
    c.victim.d0 = static_cast<std::uint32_t>(ParseAxisUnsigned(axis, value));
  } else if (axis == "d1") {
    c.victim.d1 = static_cast<std::uint32_t>(ParseAxisUnsigned(axis, value));
  } else if (axis == "key_bits") {
    c.victim.key_bits = ParseAxisUnsigned(axis, value);
  } else if (axis == "num_slots") {
    c.attack.num_slots = ParseAxisUnsigned(axis, value);
  } else if (axis == "ways") {
    c.cache.ways = static_cast<std::uint32_t>(ParseAxisUnsigned(axis, value));
  } else if (axis == "release_slots") {
    c.victim.release_slots = static_cast<std::uint32_t>(ParseAxisUnsigned(axis, value));
  } else if (axis == "target_set") {
    c.victim.target_set = static_cast<SetId>(ParseAxisUnsigned(axis, value));
  } else if (axis == "power.noise_sigma") {
    c.power.noise_sigma = ParseAxisReal(axis, value);
  } else if (axis == "power.masked") {
    c.power.masked = ParseAxisBool(axis, value);
  } else if (axis == "power.num_traces") {
    c.power.num_traces = ParseAxisUnsigned(axis, value);
  } else if (axis == "power.acquisitions") {
    c.power.acquisitions = ParseAxisUnsigned(axis, value);
  } else if (axis == "power.averaged_traces") {
    c.power.averaged_traces = ParseAxisUnsigned(axis, value);
  } else {
    throw InvalidConfig(fmt::format("unknown sweep axis '{}'", axis));
  }
  ValidateScenarioConfig(c);
}

}  // namespace sclab
