#include "choreo/serialization.hpp"

#include "json.hpp"

#include "choreo/errors.hpp"

namespace choreo {

using nlohmann::json;

namespace {

constexpr const char* kLoopKey = "alpha-independent";

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

std::string loop_to_json(const SymmetricLoop& loop) {
  json body;
  body["modes"] = loop.modes();
  body["nc1"] = loop.nc1();
  body["a"] = std::vector<double>(loop.a().begin(), loop.a().end());
  body["b"] = std::vector<double>(loop.b().begin(), loop.b().end());
  json doc;
  doc[kLoopKey] = std::move(body);
  return doc.dump(2) + "\n";
}

SymmetricLoop loop_from_json(std::string_view text) {
  const json doc = parse(text);
  try {
    const json& body = doc.at(kLoopKey);
    const int modes = body.at("modes").get<int>();
    auto a = body.at("a").get<std::vector<double>>();
    auto b = body.at("b").get<std::vector<double>>();
    if (static_cast<int>(a.size()) != modes || static_cast<int>(b.size()) != modes) {
      throw ConfigError("loop JSON: coefficient arrays must have length modes");
    }
    return SymmetricLoop(std::move(a), std::move(b), body.at("nc1").get<bool>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("loop JSON: ") + e.what());
  }
}

std::string certificate_to_json(const OrbitCertificate& c) {
  json doc;
  doc["rho"] = c.rho;
  doc["virial_residual"] = c.virial_residual;
  doc["newton_residual_sup"] = c.newton_residual_sup;
  doc["rescaled_period"] = c.rescaled_period;
  doc["closure_error"] = c.closure_error;
  doc["energy_drift"] = c.energy_drift;
  doc["min_mutual_distance"] = c.min_mutual_distance;
  doc["node_ok"] = c.node_ok;
  doc["transversal_ok"] = c.transversal_ok;
  doc["orthogonal_crossing_ok"] = c.orthogonal_crossing_ok;
  return doc.dump(2) + "\n";
}

OrbitCertificate certificate_from_json(std::string_view text) {
  const json doc = parse(text);
  try {
    OrbitCertificate c;
    c.rho = doc.at("rho").get<double>();
    c.virial_residual = doc.at("virial_residual").get<double>();
    c.newton_residual_sup = doc.at("newton_residual_sup").get<double>();
    c.rescaled_period = doc.at("rescaled_period").get<double>();
    c.closure_error = doc.at("closure_error").get<double>();
    c.energy_drift = doc.at("energy_drift").get<double>();
    c.min_mutual_distance = doc.at("min_mutual_distance").get<double>();
    c.node_ok = doc.at("node_ok").get<bool>();
    c.transversal_ok = doc.at("transversal_ok").get<bool>();
    c.orthogonal_crossing_ok = doc.at("orthogonal_crossing_ok").get<bool>();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("certificate JSON: ") + e.what());
  }
}

}  // namespace choreo
