#include "nrqed/config.hpp"

#include "nrqed/format.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace nrqed {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& text) {
  const auto b = text.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = text.find_last_not_of(" \t\r");
  return text.substr(b, e - b + 1);
}

template <typename T>
T parse_value(const std::string& section, const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty())
    throw ConfigError("[" + section + "] " + key + ": cannot parse '" + raw + "'");
  return value;
}

template <>
bool parse_value<bool>(const std::string& section, const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("[" + section + "] " + key + ": expected true or false, got '" + text + "'");
}

template <>
std::string parse_value<std::string>(const std::string&, const std::string&, const std::string& raw) {
  return trim(raw);
}

std::optional<LatticeVector> parse_block(const std::string& key, const std::string& text) {
  if (text == "none" || text == "all" || text.empty()) return std::nullopt;
  std::string t = text;
  for (char& ch : t)
    if (ch == ',') ch = ' ';
  std::istringstream in(t);
  LatticeVector m;
  std::string rest;
  in >> m.x() >> m.y() >> m.z();
  if (in.fail() || (in >> rest))
    throw ConfigError("[spectrum] " + key + ": expected three integers or 'none', got '" + text + "'");
  return m;
}

using Setter = std::function<void(Config&, const std::string&)>;

// Section -> key -> setter.
std::map<std::string, std::map<std::string, Setter>> schema() {
  std::map<std::string, std::map<std::string, Setter>> s;
  auto add = [&]<typename T>(const std::string& section, const std::string& key, auto accessor, std::type_identity<T>) {
    s[section][key] = [section, key, accessor](Config& c, const std::string& text) {
      accessor(c) = parse_value<T>(section, key, text);
    };
  };
  using D = std::type_identity<double>;
  using I = std::type_identity<int>;
  using U = std::type_identity<std::uint64_t>;
  using B = std::type_identity<bool>;
  using S = std::type_identity<std::string>;
  using L = std::type_identity<long long>;
  add("grid", "n", [](Config& c) -> int& { return c.grid.n; }, I{});
  add("grid", "box_length", [](Config& c) -> double& { return c.grid.box_length; }, D{});
  add("constants", "hbar", [](Config& c) -> double& { return c.constants.hbar; }, D{});
  add("constants", "m", [](Config& c) -> double& { return c.constants.mass; }, D{});
  add("constants", "e", [](Config& c) -> double& { return c.constants.charge; }, D{});
  add("constants", "c", [](Config& c) -> double& { return c.constants.c; }, D{});
  add("modes", "q_cutoff", [](Config& c) -> double& { return c.modes.q_cutoff; }, D{});
  add("modes", "n_max", [](Config& c) -> int& { return c.modes.n_max; }, I{});
  add("modes", "n_ph_max", [](Config& c) -> int& { return c.modes.n_ph_max; }, I{});
  add("modes", "k_cutoff", [](Config& c) -> double& { return c.modes.k_cutoff; }, D{});
  add("modes", "n_electrons", [](Config& c) -> int& { return c.modes.n_electrons; }, I{});
  s["modes"]["box_length"] = [](Config& c, const std::string& text) {
    c.modes.box_length = parse_value<double>("modes", "box_length", text);
  };
  add("dynamics", "dt", [](Config& c) -> double& { return c.dynamics.dt; }, D{});
  add("dynamics", "steps", [](Config& c) -> int& { return c.dynamics.steps; }, I{});
  add("dynamics", "output_every", [](Config& c) -> int& { return c.dynamics.output_every; }, I{});
  add("dynamics", "seed", [](Config& c) -> std::uint64_t& { return c.dynamics.seed; }, U{});
  add("dynamics", "psi_band", [](Config& c) -> int& { return c.dynamics.psi_band; }, I{});
  add("dynamics", "a_band", [](Config& c) -> int& { return c.dynamics.a_band; }, I{});
  add("dynamics", "a_amplitude", [](Config& c) -> double& { return c.dynamics.a_amplitude; }, D{});
  add("dynamics", "snapshot_every", [](Config& c) -> int& { return c.dynamics.snapshot_every; }, I{});
  add("dynamics", "snapshot_dir", [](Config& c) -> std::string& { return c.dynamics.snapshot_dir; }, S{});
  add("dynamics", "dealias", [](Config& c) -> bool& { return c.dynamics.dealias; }, B{});
  add("spectrum", "n_eigs", [](Config& c) -> int& { return c.spectrum.n_eigs; }, I{});
  add("spectrum", "tol", [](Config& c) -> double& { return c.spectrum.tol; }, D{});
  add("spectrum", "seed", [](Config& c) -> std::uint64_t& { return c.spectrum.seed; }, U{});
  add("spectrum", "max_iter", [](Config& c) -> int& { return c.spectrum.max_iter; }, I{});
  add("spectrum", "max_dimension", [](Config& c) -> long long& { return c.spectrum.max_dimension; }, L{});
  s["spectrum"]["momentum_block"] = [](Config& c, const std::string& text) {
    c.spectrum.momentum_block = parse_block("momentum_block", text);
  };
  return s;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

SectorSpec Config::sector_spec() const {
  SectorSpec spec;
  spec.n_max = modes.n_max;
  spec.n_ph_max = modes.n_ph_max;
  spec.k_cutoff = modes.k_cutoff;
  spec.n_electrons = modes.n_electrons;
  spec.total_momentum = spectrum.momentum_block;
  spec.max_dimension = static_cast<Eigen::Index>(spectrum.max_dimension);
  return spec;
}

Config parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  const auto known = schema();
  Config config;
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) throw ConfigError("key '" + section + "' outside of any section");
    const auto s = known.find(section);
    if (s == known.end()) throw ConfigError("unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      const auto k = s->second.find(key);
      if (k == s->second.end()) throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
      k->second(config, value.get_value<std::string>());
    }
  }
  validate(config);
  return config;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in);
}

void validate(const Config& c) {
  const double L = c.grid.box_length;
  require(c.grid.n >= 4 && c.grid.n % 2 == 0, "[grid] n must be even and at least 4");
  require(std::isfinite(L) && L > 0.0, "[grid] box_length must be positive");
  require(std::isfinite(c.constants.hbar) && c.constants.hbar > 0.0, "[constants] hbar must be positive");
  require(std::isfinite(c.constants.mass) && c.constants.mass > 0.0, "[constants] m must be positive");
  require(std::isfinite(c.constants.c) && c.constants.c > 0.0, "[constants] c must be positive");
  require(std::isfinite(c.constants.charge), "[constants] e must be finite");

  // lattice consistency
  const double k0 = 2.0 * std::numbers::pi / L;
  const double k_grid = k0 * (c.grid.n / 2 - 1);
  if (c.modes.box_length && *c.modes.box_length != L)
    throw ConfigError("inconsistent lattice: [modes] box_length " + format_double(*c.modes.box_length) +
                      " differs from [grid] box_length " + format_double(L));
  require(c.modes.q_cutoff >= k0 * (1.0 - 1e-12),
          "inconsistent lattice: [modes] q_cutoff " + format_double(c.modes.q_cutoff) +
              " is below the smallest lattice wavevector 2 pi / L = " + format_double(k0));
  require(c.modes.q_cutoff <= k_grid,
          "inconsistent lattice: [modes] q_cutoff " + format_double(c.modes.q_cutoff) +
              " exceeds the largest wavevector resolved by the grid, " + format_double(k_grid));
  require(c.modes.k_cutoff >= 0.0 && c.modes.k_cutoff <= k_grid,
          "inconsistent lattice: [modes] k_cutoff " + format_double(c.modes.k_cutoff) +
              " must lie in [0, " + format_double(k_grid) + "]");
  require(c.modes.n_max >= 0 && c.modes.n_max <= 255, "[modes] n_max must be in [0, 255]");
  require(c.modes.n_ph_max >= 0, "[modes] n_ph_max must be non-negative");
  require(c.modes.n_electrons == 1 || c.modes.n_electrons == 2, "[modes] n_electrons must be 1 or 2");
  require(static_cast<int>(plane_wave_orbitals(L, c.modes.k_cutoff).size()) >= c.modes.n_electrons,
          "[modes] k_cutoff admits fewer orbitals than n_electrons");

  require(std::isfinite(c.dynamics.dt) && c.dynamics.dt > 0.0, "[dynamics] dt must be positive");
  require(c.dynamics.steps >= 0, "[dynamics] steps must be non-negative");
  require(c.dynamics.output_every >= 1, "[dynamics] output_every must be at least 1");
  // |psi|^2 then stays below the Nyquist planes.
  require(c.dynamics.psi_band >= 0 && 2 * c.dynamics.psi_band < c.grid.n / 2,
          "[dynamics] psi_band must be below n/4");
  require(c.dynamics.a_band >= 1 && c.dynamics.a_band < c.grid.n / 2, "[dynamics] a_band must be in [1, n/2)");
  require(std::isfinite(c.dynamics.a_amplitude) && c.dynamics.a_amplitude >= 0.0,
          "[dynamics] a_amplitude must be non-negative");
  require(c.dynamics.snapshot_every >= 0, "[dynamics] snapshot_every must be non-negative");

  require(c.spectrum.n_eigs >= 1, "[spectrum] n_eigs must be at least 1");
  require(std::isfinite(c.spectrum.tol) && c.spectrum.tol > 0.0, "[spectrum] tol must be positive");
  require(c.spectrum.max_iter >= 1, "[spectrum] max_iter must be at least 1");
  require(c.spectrum.max_dimension >= 1, "[spectrum] max_dimension must be at least 1");
}

std::string to_ini(const Config& c) {
  std::ostringstream os;
  os << "[grid]\nn = " << c.grid.n << "\nbox_length = " << format_double(c.grid.box_length) << "\n\n";
  os << "[constants]\nhbar = " << format_double(c.constants.hbar) << "\nm = " << format_double(c.constants.mass)
     << "\ne = " << format_double(c.constants.charge) << "\nc = " << format_double(c.constants.c) << "\n\n";
  os << "[modes]\nq_cutoff = " << format_double(c.modes.q_cutoff) << "\nn_max = " << c.modes.n_max
     << "\nn_ph_max = " << c.modes.n_ph_max << "\nk_cutoff = " << format_double(c.modes.k_cutoff)
     << "\nn_electrons = " << c.modes.n_electrons << '\n';
  if (c.modes.box_length) os << "box_length = " << format_double(*c.modes.box_length) << '\n';
  os << '\n';
  const auto& d = c.dynamics;
  os << "[dynamics]\ndt = " << format_double(d.dt) << "\nsteps = " << d.steps << "\noutput_every = " << d.output_every
     << "\nseed = " << d.seed << "\npsi_band = " << d.psi_band << "\na_band = " << d.a_band
     << "\na_amplitude = " << format_double(d.a_amplitude) << "\nsnapshot_every = " << d.snapshot_every
     << "\nsnapshot_dir = " << d.snapshot_dir << "\ndealias = " << (d.dealias ? "true" : "false") << "\n\n";
  const auto& s = c.spectrum;
  os << "[spectrum]\nn_eigs = " << s.n_eigs << "\ntol = " << format_double(s.tol) << "\nseed = " << s.seed
     << "\nmax_iter = " << s.max_iter << "\nmax_dimension = " << s.max_dimension << "\nmomentum_block = ";
  if (s.momentum_block)
    os << s.momentum_block->x() << ',' << s.momentum_block->y() << ',' << s.momentum_block->z();
  else
    os << "none";
  os << '\n';
  return os.str();
}

}  // namespace nrqed
