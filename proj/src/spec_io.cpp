#include "sinr/spec_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sinr {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Vector as_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of numbers");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Index>(i)) = as_number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Matrix as_square_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  const std::size_t n = j.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = j[i];
    const std::string rpath = path + "[" + std::to_string(i) + "]";
    if (!row.is_array()) fail(rpath, "expected an array of numbers");
    if (row.size() != n)
      fail(rpath, "expected " + std::to_string(n) + " entries (square matrix), got " +
                      std::to_string(row.size()));
    for (std::size_t k = 0; k < n; ++k)
      m(static_cast<Index>(i), static_cast<Index>(k)) =
          as_number(row[k], rpath + "[" + std::to_string(k) + "]");
  }
  return m;
}

std::vector<PowerConstraint> parse_constraints(const json& j, int n) {
  std::vector<PowerConstraint> out;
  if (!j.is_array()) fail("constraints", "expected an array");
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string path = "constraints[" + std::to_string(k) + "]";
    const json& c = j[k];
    if (!c.is_object()) fail(path, "expected an object with users and bound");
    if (!c.contains("users")) fail(path + ".users", "missing");
    if (!c.contains("bound")) fail(path + ".bound", "missing");
    const json& users = c["users"];
    if (!users.is_array() || users.empty())
      fail(path + ".users", "expected a nonempty array of 1-based user indices");
    PowerConstraint pc;
    for (std::size_t u = 0; u < users.size(); ++u) {
      const std::string upath = path + ".users[" + std::to_string(u) + "]";
      if (!users[u].is_number_integer()) fail(upath, "expected an integer user index");
      const long long idx = users[u].get<long long>();
      if (idx < 1 || idx > n)
        fail(upath, "user index " + std::to_string(idx) + " out of range 1.." +
                        std::to_string(n));
      pc.users.push_back(static_cast<int>(idx - 1));
    }
    pc.bound = as_number(c["bound"], path + ".bound");
    try {
      pc.validate(n);
    } catch (const ValidationError& e) {
      fail(path, e.what());
    }
    out.push_back(std::move(pc));
  }
  return out;
}

}  // namespace

LoadedSpec parse_channel_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("parse failure: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("top level: expected an object");

  if (!j.contains("noise")) throw ValidationError("noise: missing");
  const Vector sigma2 = as_vector(j["noise"], "noise");
  const int n = static_cast<int>(sigma2.size());

  const bool has_states = j.contains("states");
  if (has_states && j.contains("gains"))
    throw ValidationError("gains: mutually exclusive with states");
  if (!has_states && !j.contains("gains"))
    throw ValidationError("gains: missing (or provide states)");

  LoadedSpec spec;
  if (!has_states) {
    Matrix G = as_square_matrix(j["gains"], "gains");
    if (G.rows() != n)
      throw ValidationError("gains: expected " + std::to_string(n) + "x" +
                            std::to_string(n) + " to match noise length, got " +
                            std::to_string(G.rows()) + "x" + std::to_string(G.cols()));
    spec.channel = ChannelModel{n, std::move(G), sigma2};
    spec.channel.validate();
  } else {
    const json& states = j["states"];
    if (!states.is_array() || states.empty())
      throw ValidationError("states: expected a nonempty array");
    TimeVaryingChannel tv;
    tv.rho = Vector(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
      const std::string path = "states[" + std::to_string(i) + "]";
      const json& st = states[i];
      if (!st.is_object()) fail(path, "expected an object with gains and prob");
      if (!st.contains("gains")) fail(path + ".gains", "missing");
      if (!st.contains("prob")) fail(path + ".prob", "missing");
      Matrix G = as_square_matrix(st["gains"], path + ".gains");
      if (G.rows() != n)
        fail(path + ".gains", "expected " + std::to_string(n) + "x" + std::to_string(n) +
                                  " to match noise length, got " + std::to_string(G.rows()) +
                                  "x" + std::to_string(G.cols()));
      ChannelModel ch{n, std::move(G), sigma2};
      try {
        ch.validate();
      } catch (const ValidationError& e) {
        fail(path, e.what());
      }
      tv.states.push_back(std::move(ch));
      tv.rho(static_cast<Index>(i)) = as_number(st["prob"], path + ".prob");
    }
    tv.validate();
    spec.channel = tv.states.front();
    spec.time_varying = std::move(tv);
  }

  if (j.contains("constraints"))
    spec.constraints = parse_constraints(j["constraints"], n);
  return spec;
}

LoadedSpec load_channel_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_channel_spec(buf.str());
}

std::string serialize_channel_spec(const LoadedSpec& spec) {
  json j = json::object();
  auto matrix_to_json = [](const Matrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
      rows.push_back(std::move(row));
    }
    return rows;
  };

  if (spec.time_varying) {
    json states = json::array();
    for (std::size_t i = 0; i < spec.time_varying->states.size(); ++i) {
      json st = json::object();
      st["gains"] = matrix_to_json(spec.time_varying->states[i].G);
      st["prob"] = spec.time_varying->rho(static_cast<Index>(i));
      states.push_back(std::move(st));
    }
    j["states"] = std::move(states);
  } else {
    j["gains"] = matrix_to_json(spec.channel.G);
  }

  json noise = json::array();
  for (Index i = 0; i < spec.channel.sigma2.size(); ++i)
    noise.push_back(spec.channel.sigma2(i));
  j["noise"] = std::move(noise);

  if (!spec.constraints.empty()) {
    json cs = json::array();
    for (const auto& c : spec.constraints) {
      json jc = json::object();
      json users = json::array();
      for (int u : c.users) users.push_back(u + 1);
      jc["users"] = std::move(users);
      jc["bound"] = c.bound;
      cs.push_back(std::move(jc));
    }
    j["constraints"] = std::move(cs);
  }
  return j.dump(2) + "\n";
}

}  // namespace sinr
