#include "trilat/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace trilat {

namespace {

using nlohmann::json;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string int_list(const std::vector<int>& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "]";
}

std::string float_list(const std::vector<double>& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + "]";
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

const json& field(const json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name))
    throw FormatError(std::string("missing field \"") + name + "\"");
  return obj.at(name);
}

int int_field(const json& obj, const char* name) {
  const json& v = field(obj, name);
  if (!v.is_number_integer()) throw FormatError(std::string("field \"") + name + "\" must be an integer");
  return v.get<int>();
}

double number(const json& v) {
  if (!v.is_number()) throw FormatError("expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw FormatError("non-finite number");
  return x;
}

std::vector<int> int_array(const json& v) {
  if (!v.is_array()) throw FormatError("expected an array of integers");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw FormatError("expected an integer");
    out.push_back(x.get<int>());
  }
  return out;
}

}  // namespace

std::string dataset_to_json(const DataSet& data) {
  std::ostringstream os;
  os << "{\"dim\": " << data.dim << ", \"bound\": " << data.bound << ", \"mode\": \""
     << to_string(data.mode) << "\", \"values\": " << float_list(data.values) << "}\n";
  return os.str();
}

std::string configuration_to_json(const Configuration& cfg) {
  std::ostringstream os;
  os << "{\"dim\": " << cfg.dim() << ", \"points\": [";
  const auto pts = cfg.to_vectors();
  for (size_t i = 0; i < pts.size(); ++i) os << (i ? ", " : "") << float_list(pts[i]);
  os << "]}\n";
  return os.str();
}

std::string paths_to_json(const std::vector<Path>& paths) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < paths.size(); ++i)
    os << (i ? ",\n " : "") << "{\"path\": " << int_list(paths[i].vertices) << "}";
  os << "]\n";
  return os.str();
}

std::string labeling_to_json(const std::vector<Explanation>& labeling, const DataSet& data) {
  std::vector<Explanation> sorted = labeling;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.value_index < b.value_index; });
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < sorted.size(); ++i) {
    const auto& e = sorted[i];
    os << (i ? ",\n " : "") << "{\"value_index\": " << e.value_index
       << ", \"value\": " << fmt(data.values.at(static_cast<size_t>(e.value_index)))
       << ", \"path\": " << int_list(e.path.vertices) << "}";
  }
  os << "]\n";
  return os.str();
}

DataSet dataset_from_json(const std::string& text) {
  const json j = parse(text);
  DataSet d;
  d.dim = int_field(j, "dim");
  d.bound = int_field(j, "bound");
  const json& mode = field(j, "mode");
  if (!mode.is_string()) throw FormatError("field \"mode\" must be a string");
  try {
    d.mode = mode_from_string(mode.get<std::string>());
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
  const json& values = field(j, "values");
  if (!values.is_array()) throw FormatError("field \"values\" must be an array");
  for (const auto& v : values) {
    const double x = number(v);
    if (!(x > 0.0)) throw FormatError("data values must be positive");
    d.values.push_back(x);
  }
  if (d.dim < 1) throw FormatError("field \"dim\" must be >= 1");
  if (d.bound < 1) throw FormatError("field \"bound\" must be >= 1");
  return d;
}

Configuration configuration_from_json(const std::string& text) {
  const json j = parse(text);
  const int dim = int_field(j, "dim");
  if (dim < 1) throw FormatError("field \"dim\" must be >= 1");
  const json& pts = field(j, "points");
  if (!pts.is_array()) throw FormatError("field \"points\" must be an array");
  std::vector<std::vector<double>> rows;
  for (const auto& p : pts) {
    if (!p.is_array() || static_cast<int>(p.size()) != dim)
      throw FormatError("each point needs exactly dim coordinates");
    std::vector<double> row;
    for (const auto& x : p) row.push_back(number(x));
    rows.push_back(std::move(row));
  }
  return Configuration(dim, rows);
}

std::vector<Path> paths_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_array()) throw FormatError("ensemble file must be an array");
  std::vector<Path> out;
  for (const auto& e : j) out.push_back(Path{int_array(field(e, "path"))});
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw Error("failed writing " + path);
}

std::string render_svg(const Configuration& cfg, const std::vector<Path>& paths) {
  if (cfg.dim() != 2) throw InvalidArgument("plots are only available for d = 2");
  const double size = 480.0, margin = 24.0;
  Eigen::Vector2d lo(0, 0), hi(1, 1);
  if (!cfg.empty()) {
    lo = cfg.rows().colwise().minCoeff().transpose();
    hi = cfg.rows().colwise().maxCoeff().transpose();
  }
  const double span = std::max({hi(0) - lo(0), hi(1) - lo(1), 1e-12});
  auto px = [&](const Eigen::VectorXd& p) {
    return Eigen::Vector2d(margin + (p(0) - lo(0)) / span * (size - 2 * margin),
                           size - margin - (p(1) - lo(1)) / span * (size - 2 * margin));
  };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
     << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& path : paths) {
    os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-opacity=\"0.5\" points=\"";
    for (size_t k = 0; k < path.vertices.size(); ++k) {
      const int v = path.vertices[k];
      if (v < 0 || v >= cfg.size()) continue;
      const Eigen::Vector2d q = px(cfg.point(v));
      os << (k ? " " : "") << q(0) << "," << q(1);
    }
    os << "\"/>\n";
  }
  for (int i = 0; i < cfg.size(); ++i) {
    const Eigen::Vector2d q = px(cfg.point(i));
    os << "<circle cx=\"" << q(0) << "\" cy=\"" << q(1) << "\" r=\"4\" fill=\"black\"/>\n";
    os << "<text x=\"" << q(0) + 6 << "\" y=\"" << q(1) - 6 << "\" font-size=\"12\">" << i
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace trilat
