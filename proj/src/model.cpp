#include "cpeps/model.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace cpeps {

using nlohmann::json;

bool mode_less(const ModeIndex& a, const ModeIndex& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.species != b.species) return static_cast<int>(a.species) < static_cast<int>(b.species);
  return a.flavor < b.flavor;
}

std::vector<double> momentum_grid(int n_x, double eps) {
  if (n_x < 1) throw ConfigError("lattice.n_x: must be >= 1");
  if (eps <= 0) throw ConfigError("lattice.epsilon: must be positive");
  std::vector<double> out(n_x);
  for (int n = 0; n < n_x; ++n) {
    // fold n > N/2 to negative branch; p = pi/eps (2n == N) stays.
    const int m = (2 * n > n_x) ? n - n_x : n;
    out[n] = 2.0 * kPi * m / (n_x * eps);
  }
  return out;
}

std::string fnv1a_hex(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

std::vector<Mat> constant_profile(const Mat& value, int n_x) {
  return std::vector<Mat>(static_cast<size_t>(n_x), value);
}

std::vector<Mat> gaussian_bump_profile(const Mat& amplitude, double width,
                                       double center, int n_x, double eps_x) {
  std::vector<Mat> out;
  out.reserve(n_x);
  for (int i = 0; i < n_x; ++i) {
    const double x = i * eps_x;
    const double u = (x - center) / width;
    out.push_back(amplitude * std::exp(-0.5 * u * u));
  }
  return out;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void require_keys(const json& j, const std::string& path,
                  const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
  }
}

double get_num(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

Cplx parse_cplx(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [re, im]");
  return Cplx(get_num(j[0], path + "[0]"), get_num(j[1], path + "[1]"));
}

Mat parse_matrix(const json& j, int d, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != d)
    fail(path, "expected " + std::to_string(d) + " rows");
  Mat m(d, d);
  for (int r = 0; r < d; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      fail(path, "expected " + std::to_string(d) + " columns in row " + std::to_string(r));
    for (int c = 0; c < d; ++c)
      m(r, c) = parse_cplx(row[c], path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  if (!m.allFinite()) fail(path, "matrix entries must be finite");
  return m;
}

// Spatial profile: a bare matrix (constant), a preset object, or a full table.
std::vector<Mat> parse_profile(const json& j, int d, int n_x, double eps_x,
                               const std::string& path) {
  if (j.is_array() && (j.empty() || !j[0].is_array() || j[0].empty() ||
                       j[0][0].is_array() == false)) {
    fail(path, "expected a d x d matrix of [re,im] pairs, a preset, or a table");
  }
  if (j.is_object()) {
    if (j.contains("preset")) {
      require_keys(j, path, {"preset", "matrix", "amplitude", "width", "center"});
      const std::string preset = j.at("preset").get<std::string>();
      if (preset == "constant") {
        return constant_profile(parse_matrix(j.at("matrix"), d, path + ".matrix"), n_x);
      }
      if (preset == "gaussian_bump") {
        const Mat amp = parse_matrix(j.at("amplitude"), d, path + ".amplitude");
        const double width = get_num(j.at("width"), path + ".width");
        if (width <= 0) fail(path + ".width", "must be positive");
        const double center = j.contains("center")
                                  ? get_num(j.at("center"), path + ".center")
                                  : 0.5 * n_x * eps_x;
        return gaussian_bump_profile(amp, width, center, n_x, eps_x);
      }
      fail(path + ".preset", "unknown preset '" + preset + "'");
    }
    if (j.contains("table")) {
      require_keys(j, path, {"table"});
      const json& tbl = j.at("table");
      if (!tbl.is_array() || static_cast<int>(tbl.size()) != n_x)
        fail(path + ".table", "expected " + std::to_string(n_x) + " entries");
      std::vector<Mat> out;
      out.reserve(n_x);
      for (int i = 0; i < n_x; ++i)
        out.push_back(parse_matrix(tbl[i], d, path + ".table[" + std::to_string(i) + "]"));
      return out;
    }
    fail(path, "expected 'preset' or 'table'");
  }
  // bare matrix, constant over x
  return constant_profile(parse_matrix(j, d, path), n_x);
}

std::vector<std::vector<Mat>> broadcast_t(std::vector<Mat> profile, int n_t) {
  std::vector<std::vector<Mat>> out(std::max(n_t, 1));
  for (auto& slice : out) slice = profile;
  return out;
}

BoundaryKind parse_boundary_kind(const json& j, const std::string& path) {
  const std::string s = j.get<std::string>();
  if (s == "uniform_a") return BoundaryKind::UniformA;
  if (s == "uniform_ab") return BoundaryKind::UniformAB;
  fail(path, "unknown boundary preset '" + s + "'");
}

double coupling_smoothness(const CouplingFields& c, int n_x) {
  double worst = 0.0;
  auto scan = [&](const std::vector<Mat>& prof) {
    for (size_t i = 0; i + 1 < prof.size(); ++i)
      worst = std::max(worst, (prof[i + 1] - prof[i]).cwiseAbs().maxCoeff());
  };
  for (const auto& slice : c.m0) scan(slice);
  for (const auto& slice : c.r) scan(slice);
  if (c.f) scan(*c.f);
  (void)n_x;
  return worst;
}

}  // namespace

ModelSpec validate_config_text(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  require_keys(root, "config",
               {"schema_version", "lattice", "couplings", "boundary", "statistics",
                "cmps", "theta"});
  if (!root.contains("schema_version") || get_int(root.at("schema_version"), "schema_version") != 1)
    fail("schema_version", "must be 1");

  ModelSpec spec;

  // lattice
  {
    if (!root.contains("lattice")) fail("lattice", "missing");
    const json& jl = root.at("lattice");
    require_keys(jl, "lattice", {"epsilon", "epsilon_x", "n_x", "n_t", "bc"});
    LatticeSpec& l = spec.lattice;
    l.epsilon = jl.contains("epsilon") ? get_num(jl.at("epsilon"), "lattice.epsilon") : 1.0;
    if (l.epsilon <= 0) fail("lattice.epsilon", "epsilon must be positive");
    l.epsilon_x = jl.contains("epsilon_x") ? get_num(jl.at("epsilon_x"), "lattice.epsilon_x")
                                           : l.epsilon;  // default eps_x = eps
    if (l.epsilon_x <= 0) fail("lattice.epsilon_x", "epsilon_x must be positive");
    l.n_x = jl.contains("n_x") ? get_int(jl.at("n_x"), "lattice.n_x") : 1;
    if (l.n_x < 1) fail("lattice.n_x", "must be >= 1");
    l.n_t = jl.contains("n_t") ? get_int(jl.at("n_t"), "lattice.n_t") : 0;
    if (l.n_t < 0) fail("lattice.n_t", "must be >= 0");
    if (jl.contains("bc")) {
      const std::string bc = jl.at("bc").get<std::string>();
      if (bc == "periodic") l.bc = SpatialBc::Periodic;
      else if (bc == "open") l.bc = SpatialBc::Open;
      else fail("lattice.bc", "expected 'periodic' or 'open'");
    }
  }

  // couplings
  {
    if (!root.contains("couplings")) fail("couplings", "missing");
    const json& jc = root.at("couplings");
    require_keys(jc, "couplings", {"d", "j", "m0", "r", "f"});
    CouplingFields& c = spec.couplings;
    c.d = jc.contains("d") ? get_int(jc.at("d"), "couplings.d") : 1;
    if (c.d < 1) fail("couplings.d", "must be >= 1");
    const int n_x = spec.lattice.n_x;
    const int n_t = std::max(spec.lattice.n_t, 1);
    const double ex = spec.lattice.epsilon_x;
    const Mat zero = Mat::Zero(c.d, c.d);
    // J: matrix constant in t, or a per-step table
    if (jc.contains("j")) {
      const json& jj = jc.at("j");
      if (jj.is_object()) {
        require_keys(jj, "couplings.j", {"table_t"});
        const json& tbl = jj.at("table_t");
        if (!tbl.is_array() || static_cast<int>(tbl.size()) != n_t)
          fail("couplings.j.table_t", "expected " + std::to_string(n_t) + " entries");
        c.j.clear();
        for (int t = 0; t < n_t; ++t)
          c.j.push_back(parse_matrix(tbl[t], c.d, "couplings.j.table_t[" + std::to_string(t) + "]"));
      } else {
        c.j.assign(n_t, parse_matrix(jj, c.d, "couplings.j"));
      }
    } else {
      c.j.assign(n_t, zero);
    }
    auto parse_xt = [&](const char* key) -> std::vector<std::vector<Mat>> {
      if (!jc.contains(key)) return broadcast_t(constant_profile(zero, n_x), n_t);
      const json& jf = jc.at(key);
      const std::string path = std::string("couplings.") + key;
      if (jf.is_object() && jf.contains("table_xt")) {
        require_keys(jf, path, {"table_xt"});
        const json& tbl = jf.at("table_xt");
        if (!tbl.is_array() || static_cast<int>(tbl.size()) != n_t)
          fail(path + ".table_xt", "expected " + std::to_string(n_t) + " time slices");
        std::vector<std::vector<Mat>> out(n_t);
        for (int t = 0; t < n_t; ++t) {
          const json& row = tbl[t];
          if (!row.is_array() || static_cast<int>(row.size()) != n_x)
            fail(path + ".table_xt[" + std::to_string(t) + "]",
                 "expected " + std::to_string(n_x) + " sites");
          for (int x = 0; x < n_x; ++x)
            out[t].push_back(parse_matrix(row[x], c.d, path + ".table_xt[" +
                                          std::to_string(t) + "][" + std::to_string(x) + "]"));
        }
        return out;
      }
      return broadcast_t(parse_profile(jf, c.d, n_x, ex, path), n_t);
    };
    c.m0 = parse_xt("m0");
    c.r = parse_xt("r");
    if (jc.contains("f")) {
      const json& jf = jc.at("f");
      c.f = parse_profile(jf, c.d, n_x, ex, "couplings.f");
      if (jf.is_object() && jf.contains("preset") &&
          jf.at("preset").get<std::string>() == "gaussian_bump") {
        GaussianBumpSpec bump;
        bump.amplitude = parse_matrix(jf.at("amplitude"), c.d, "couplings.f.amplitude");
        bump.width = get_num(jf.at("width"), "couplings.f.width");
        bump.center = jf.contains("center") ? get_num(jf.at("center"), "couplings.f.center")
                                            : 0.5 * n_x * ex;
        c.f_bump = std::move(bump);
      }
    }
    c.smoothness_score = coupling_smoothness(c, n_x);
  }

  // boundary
  {
    const int n_modes = 2 * spec.couplings.d * spec.lattice.n_x;
    BoundarySpec& b = spec.boundary;
    if (root.contains("boundary")) {
      const json& jb = root.at("boundary");
      require_keys(jb, "boundary", {"omega_l", "omega_r", "n_aux"});
      b.n_aux = jb.contains("n_aux") ? get_int(jb.at("n_aux"), "boundary.n_aux") : 1;
      if (b.n_aux < 1) fail("boundary.n_aux", "must be >= 1");
      if (b.n_aux > n_modes) fail("boundary.n_aux", "exceeds mode count");
      auto parse_side = [&](const char* key, BoundaryKind& kind, std::vector<Cplx>& amps) {
        if (!jb.contains(key)) return;
        const json& js = jb.at(key);
        if (js.is_string()) {
          kind = parse_boundary_kind(js, std::string("boundary.") + key);
        } else if (js.is_array()) {
          if (b.n_aux != 1)
            fail(std::string("boundary.") + key, "explicit amplitudes require n_aux = 1");
          if (static_cast<int>(js.size()) != n_modes)
            fail(std::string("boundary.") + key,
                 "expected " + std::to_string(n_modes) + " mode amplitudes");
          kind = BoundaryKind::SingleParticle;
          amps.resize(n_modes);
          double norm2 = 0;
          for (int i = 0; i < n_modes; ++i) {
            amps[i] = parse_cplx(js[i], std::string("boundary.") + key + "[" + std::to_string(i) + "]");
            norm2 += std::norm(amps[i]);
          }
          if (!(norm2 > 0) || !std::isfinite(norm2))
            fail(std::string("boundary.") + key, "boundary vector must be nonzero and finite");
        } else {
          fail(std::string("boundary.") + key, "expected preset string or amplitude array");
        }
      };
      parse_side("omega_l", b.kind_l, b.amps_l);
      parse_side("omega_r", b.kind_r, b.amps_r);
    }
  }

  // statistics
  if (root.contains("statistics")) {
    const json& js = root.at("statistics");
    require_keys(js, "statistics", {"aux", "aux_cutoff", "phys_cutoff"});
    StatisticsSpec& s = spec.statistics;
    if (js.contains("aux")) {
      const std::string a = js.at("aux").get<std::string>();
      if (a == "fermionic") s.aux = AuxStatistics::Fermionic;
      else if (a == "bosonic") s.aux = AuxStatistics::Bosonic;
      else fail("statistics.aux", "expected 'fermionic' or 'bosonic'");
    }
    if (js.contains("aux_cutoff")) {
      s.aux_cutoff = get_int(js.at("aux_cutoff"), "statistics.aux_cutoff");
      if (s.aux_cutoff < 1) fail("statistics.aux_cutoff", "must be >= 1");
    }
    if (js.contains("phys_cutoff")) {
      s.phys_cutoff = get_int(js.at("phys_cutoff"), "statistics.phys_cutoff");
      if (s.phys_cutoff < 1) fail("statistics.phys_cutoff", "must be >= 1");
    }
  }

  // cmps (optional)
  if (root.contains("cmps")) {
    const json& jc = root.at("cmps");
    require_keys(jc, "cmps",
                 {"d", "k", "r1", "omega_l", "omega_r", "l", "n_steps", "n_max",
                  "statistics", "step"});
    CmpsSpec c;
    c.d = jc.contains("d") ? get_int(jc.at("d"), "cmps.d") : 1;
    if (c.d < 1) fail("cmps.d", "must be >= 1");
    c.k = jc.contains("k") ? parse_matrix(jc.at("k"), c.d, "cmps.k") : Mat::Zero(c.d, c.d);
    if ((c.k - c.k.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
      fail("cmps.k", "K must be hermitian to 1e-12");
    c.r1 = jc.contains("r1") ? parse_matrix(jc.at("r1"), c.d, "cmps.r1") : Mat::Zero(c.d, c.d);
    auto parse_vec = [&](const char* key) -> Vec {
      Vec v = Vec::Ones(c.d);
      if (jc.contains(key)) {
        const json& ja = jc.at(key);
        if (!ja.is_array() || static_cast<int>(ja.size()) != c.d)
          fail(std::string("cmps.") + key, "expected " + std::to_string(c.d) + " entries");
        for (int i = 0; i < c.d; ++i)
          v(i) = parse_cplx(ja[i], std::string("cmps.") + key + "[" + std::to_string(i) + "]");
      }
      if (v.norm() == 0) fail(std::string("cmps.") + key, "must be nonzero");
      return v;
    };
    c.omega_l = parse_vec("omega_l");
    c.omega_r = parse_vec("omega_r");
    c.l = jc.contains("l") ? get_num(jc.at("l"), "cmps.l") : 1.0;
    if (c.l < 0) fail("cmps.l", "must be >= 0");
    c.n_steps = jc.contains("n_steps") ? get_int(jc.at("n_steps"), "cmps.n_steps") : 4;
    if (c.n_steps < 1) fail("cmps.n_steps", "must be >= 1");
    c.n_max = jc.contains("n_max") ? get_int(jc.at("n_max"), "cmps.n_max") : 1;
    if (c.n_max < 1) fail("cmps.n_max", "must be >= 1");
    if (jc.contains("statistics")) {
      const std::string a = jc.at("statistics").get<std::string>();
      if (a == "fermionic") c.statistics = AuxStatistics::Fermionic;
      else if (a == "bosonic") c.statistics = AuxStatistics::Bosonic;
      else fail("cmps.statistics", "expected 'fermionic' or 'bosonic'");
    }
    if (jc.contains("step")) {
      const std::string st = jc.at("step").get<std::string>();
      if (st == "linear") c.exp_step = false;
      else if (st == "exp") c.exp_step = true;
      else fail("cmps.step", "expected 'linear' or 'exp'");
    }
    spec.cmps = std::move(c);
  }

  if (root.contains("theta")) {
    const double th = get_num(root.at("theta"), "theta");
    if (std::abs(std::cos(2.0 * th)) < 1e-8)
      fail("theta", "|cos 2 theta| < 1e-8 (metric continuation singularity)");
    spec.theta = th;
  }

  // precomputed momentum grid and mode ordering
  if (spec.lattice.bc == SpatialBc::Periodic)
    spec.momenta = momentum_grid(spec.lattice.n_x, spec.lattice.epsilon);
  const int n_modes = 2 * spec.couplings.d * spec.lattice.n_x;
  spec.mode_order.reserve(n_modes);
  for (int id = 0; id < n_modes; ++id)
    spec.mode_order.push_back(mode_from_id(id, spec.couplings.d));

  spec.config_hash = fnv1a_hex(json_text);
  return spec;
}

ModelSpec load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return validate_config_text(ss.str());
}

}  // namespace cpeps
