#include "gridattack/case_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gridattack/bundled_data.hpp"
#include "gridattack/errors.hpp"

namespace gridattack::core {

namespace {

using nlohmann::json;

BusType bus_type_from(const std::string& s) {
  if (s == "slack") return BusType::Slack;
  if (s == "PV") return BusType::PV;
  if (s == "PQ") return BusType::PQ;
  throw ParseError("unknown bus type '" + s + "'");
}

}  // namespace

NetworkCase load_case_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("case JSON: ") + e.what());
  }
  NetworkCase nc;
  try {
    nc.name = j.value("name", "unnamed");
    nc.system_mva = j.value("system_mva", 100.0);
    nc.frequency_hz = j.value("frequency_hz", 60.0);
    for (const auto& jb : j.at("buses")) {
      Bus b;
      b.id = jb.at("id").get<int>();
      b.base_kv = jb.at("base_kv").get<double>();
      b.type = bus_type_from(jb.at("type").get<std::string>());
      b.area = jb.value("area", 1);
      b.p_load = jb.value("p_load", 0.0);
      b.q_load = jb.value("q_load", 0.0);
      b.b_shunt = jb.value("b_shunt", 0.0);
      b.p_gen = jb.value("p_gen", 0.0);
      b.v_set = jb.value("v_set", 1.0);
      nc.buses.push_back(b);
    }
    for (const auto& jb : j.at("branches")) {
      Branch br;
      br.from = jb.at("from").get<int>();
      br.to = jb.at("to").get<int>();
      br.r = jb.value("r", 0.0);
      br.x = jb.at("x").get<double>();
      br.b = jb.value("b", 0.0);
      nc.branches.push_back(br);
    }
    for (const auto& jm : j.at("machines")) {
      MachineParams m;
      m.bus = jm.at("bus").get<int>();
      m.sn_mva = jm.at("sn_mva").get<double>();
      m.xd = jm.at("xd").get<double>();
      m.xq = jm.at("xq").get<double>();
      m.xd1 = jm.at("xd1").get<double>();
      m.xq1 = jm.at("xq1").get<double>();
      m.xd2 = jm.at("xd2").get<double>();
      m.xq2 = jm.at("xq2").get<double>();
      m.xl = jm.at("xl").get<double>();
      m.ra = jm.value("ra", 0.0);
      m.td10 = jm.at("td10").get<double>();
      m.tq10 = jm.at("tq10").get<double>();
      m.td20 = jm.at("td20").get<double>();
      m.tq20 = jm.at("tq20").get<double>();
      m.h = jm.at("h").get<double>();
      m.d = jm.value("d", 0.0);
      nc.machines.push_back(m);
    }
    for (const auto& jg : j.value("governors", json::array())) {
      GovernorParams g;
      g.bus = jg.at("bus").get<int>();
      g.r = jg.at("r").get<double>();
      g.t1 = jg.at("t1").get<double>();
      g.t2 = jg.at("t2").get<double>();
      g.t3 = jg.at("t3").get<double>();
      g.vmax = jg.at("vmax").get<double>();
      g.vmin = jg.at("vmin").get<double>();
      g.dt = jg.value("dt", 0.0);
      g.wref = jg.value("wref", 1.0);
      nc.governors.push_back(g);
    }
    for (const auto& je : j.value("exciters", json::array())) {
      ExciterParams e;
      e.bus = je.at("bus").get<int>();
      e.ka = je.at("ka").get<double>();
      e.ta = je.at("ta").get<double>();
      e.ke = je.at("ke").get<double>();
      e.te = je.at("te").get<double>();
      e.kf = je.at("kf").get<double>();
      e.tf = je.at("tf").get<double>();
      e.vrmax = je.at("vrmax").get<double>();
      e.vrmin = je.at("vrmin").get<double>();
      e.e1 = je.value("e1", 0.0);
      e.se1 = je.value("se1", 0.0);
      e.e2 = je.value("e2", 0.0);
      e.se2 = je.value("se2", 0.0);
      nc.exciters.push_back(e);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("case JSON: ") + e.what());
  }
  nc.validate();
  return nc;
}

NetworkCase load_case_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open case file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_case_text(ss.str());
}

const std::string& bundled_case_text() { return bundled::kKundurCaseJson; }

const NetworkCase& bundled_case() {
  static const NetworkCase nc = load_case_text(bundled_case_text());
  return nc;
}

}  // namespace gridattack::core
