#include "gridattack/trajectory.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "gridattack/errors.hpp"

namespace gridattack::sim {

Eigen::VectorXd Trajectory::injection_series(int channel) const {
  if (channel < 0 || channel >= static_cast<int>(injection_labels.size())) {
    throw core::ContractError("injection channel out of range");
  }
  Eigen::VectorXd s(n_steps());
  for (int i = 0; i < n_steps(); ++i) s[i] = steps[i].injected[channel];
  return s;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, long line_no) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw core::ParseError("malformed numeric field '" + s + "'", line_no);
  }
  return v;
}

}  // namespace

std::string trajectory_to_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "time_s";
  for (int id : traj.bus_ids) os << ",v_bus_" << id;
  for (int b : traj.machine_buses) os << ",freq_hz_g" << b;
  for (int b : traj.machine_buses) os << ",rocof_hzps_g" << b;
  for (const std::string& label : traj.injection_labels) os << ",inj_" << label;
  os << "\n";
  for (const TrajectoryStep& st : traj.steps) {
    os << format_double(st.t);
    for (int i = 0; i < st.meas.bus_v.size(); ++i) os << "," << format_double(st.meas.bus_v[i]);
    for (int m = 0; m < st.meas.gen_freq_hz.size(); ++m) {
      os << "," << format_double(st.meas.gen_freq_hz[m]);
    }
    for (int m = 0; m < st.meas.gen_rocof_hzps.size(); ++m) {
      os << "," << format_double(st.meas.gen_rocof_hzps[m]);
    }
    for (int i = 0; i < st.injected.size(); ++i) os << "," << format_double(st.injected[i]);
    os << "\n";
  }
  return os.str();
}

Trajectory trajectory_from_csv(const std::string& csv_text) {
  std::istringstream is(csv_text);
  std::string line;
  if (!std::getline(is, line)) throw core::ParseError("empty trajectory CSV", 1);
  const std::vector<std::string> header = split_csv_line(line);
  if (header.empty() || header[0] != "time_s") {
    throw core::ParseError("trajectory CSV must start with a time_s column", 1);
  }

  Trajectory traj;
  std::vector<int> col_kind(header.size(), -1);  // 0 busv, 1 freq, 2 rocof, 3 inj
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string& h = header[c];
    auto starts = [&h](const char* p) { return h.rfind(p, 0) == 0; };
    if (starts("v_bus_")) {
      col_kind[c] = 0;
      traj.bus_ids.push_back(static_cast<int>(parse_double(h.substr(6), 1)));
    } else if (starts("freq_hz_g")) {
      col_kind[c] = 1;
      traj.machine_buses.push_back(static_cast<int>(parse_double(h.substr(9), 1)));
    } else if (starts("rocof_hzps_g")) {
      col_kind[c] = 2;
    } else if (starts("inj_")) {
      col_kind[c] = 3;
      traj.injection_labels.push_back(h.substr(4));
    } else {
      throw core::ParseError("unknown trajectory column '" + h + "'", 1);
    }
  }

  const int nb = static_cast<int>(traj.bus_ids.size());
  const int nm = static_cast<int>(traj.machine_buses.size());
  const int ni = static_cast<int>(traj.injection_labels.size());

  long line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw core::ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
    }
    TrajectoryStep st;
    st.t = parse_double(fields[0], line_no);
    st.meas.t = st.t;
    st.meas.bus_v.resize(nb);
    st.meas.gen_freq_hz.resize(nm);
    st.meas.gen_rocof_hzps.resize(nm);
    st.meas.gen_v.resize(nm);
    st.injected.resize(ni);
    int ib = 0, ifr = 0, iro = 0, ii = 0;
    for (std::size_t c = 1; c < fields.size(); ++c) {
      const double v = parse_double(fields[c], line_no);
      switch (col_kind[c]) {
        case 0: st.meas.bus_v[ib++] = v; break;
        case 1: st.meas.gen_freq_hz[ifr++] = v; break;
        case 2: st.meas.gen_rocof_hzps[iro++] = v; break;
        case 3: st.injected[ii++] = v; break;
        default: break;
      }
    }
    // terminal voltage of each machine from its bus column when present
    for (int m = 0; m < nm; ++m) {
      st.meas.gen_v[m] = 1.0;
      for (int b = 0; b < nb; ++b) {
        if (traj.bus_ids[b] == traj.machine_buses[m]) st.meas.gen_v[m] = st.meas.bus_v[b];
      }
    }
    traj.steps.push_back(std::move(st));
  }
  return traj;
}

}  // namespace gridattack::sim
