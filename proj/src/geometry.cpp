#include "bettitest/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "bettitest/error.hpp"

namespace bettitest {

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords, std::vector<int> labels)
    : dim_(dim), coords_(std::move(coords)), labels_(std::move(labels)) {
  if (dim_ == 0) throw DomainError("point cloud dimension must be >= 1");
  if (coords_.empty() || coords_.size() % dim_ != 0)
    throw DomainError("point cloud needs a positive multiple of dim coordinates");
  if (!labels_.empty() && labels_.size() != size())
    throw DomainError("label count does not match point count");
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DomainError("point cloud needs at least one point");
  const std::size_t d = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * d);
  for (const auto& row : rows) {
    if (row.size() != d) throw DomainError("rows have different dimensions");
    coords.insert(coords.end(), row.begin(), row.end());
  }
  return PointCloud(d, std::move(coords));
}

PointCloud PointCloud::scaled(double factor) const {
  std::vector<double> c = coords_;
  for (double& v : c) v *= factor;
  return PointCloud(dim_, std::move(c), labels_);
}

PointCloud PointCloud::select(std::span<const std::size_t> indices) const {
  std::vector<double> c;
  c.reserve(indices.size() * dim_);
  std::vector<int> l;
  for (std::size_t i : indices) {
    auto p = point(i);
    c.insert(c.end(), p.begin(), p.end());
    if (!labels_.empty()) l.push_back(labels_[i]);
  }
  return PointCloud(dim_, std::move(c), std::move(l));
}

PointCloud concatenate(const PointCloud& a, const PointCloud& b) {
  if (a.dim() != b.dim()) throw LengthMismatch(a.dim(), b.dim());
  std::vector<double> c = a.coords();
  c.insert(c.end(), b.coords().begin(), b.coords().end());
  std::vector<int> labels(a.size(), 0);
  labels.resize(a.size() + b.size(), 1);
  return PointCloud(a.dim(), std::move(c), std::move(labels));
}

ScalingMode parse_scaling_mode(std::string_view name) {
  if (name == "per_point_norm") return ScalingMode::per_point_norm;
  if (name == "none") return ScalingMode::none;
  if (name == "max_norm") return ScalingMode::max_norm;
  throw DomainError("unknown scaling mode '" + std::string(name) + "'");
}

std::string to_string(ScalingMode mode) {
  switch (mode) {
    case ScalingMode::per_point_norm: return "per_point_norm";
    case ScalingMode::none: return "none";
    case ScalingMode::max_norm: return "max_norm";
  }
  return "?";
}

double euclidean_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return std::sqrt(s);
}

namespace {
constexpr double kZeroNorm = 1e-12;
}

PointCloud normalize_by_norm(const PointCloud& pc) {
  std::vector<double> c(pc.coords().size());
  const std::size_t d = pc.dim();
  for (std::size_t i = 0; i < pc.size(); ++i) {
    auto p = pc.point(i);
    const double norm = euclidean_norm(p);
    if (!(norm >= kZeroNorm)) throw ZeroNormPoint(i);
    for (std::size_t k = 0; k < d; ++k) c[i * d + k] = p[k] / norm;
  }
  return PointCloud(d, std::move(c), pc.labels());
}

PointCloud apply_scaling(const PointCloud& pc, ScalingMode mode) {
  switch (mode) {
    case ScalingMode::per_point_norm: return normalize_by_norm(pc);
    case ScalingMode::none: return pc;
    case ScalingMode::max_norm: {
      double largest = 0.0;
      for (std::size_t i = 0; i < pc.size(); ++i) largest = std::max(largest, euclidean_norm(pc.point(i)));
      if (!(largest >= kZeroNorm)) throw ZeroNormPoint(0);
      return pc.scaled(1.0 / largest);
    }
  }
  return pc;
}

DistanceMatrix pairwise_distances(const PointCloud& pc) {
  DistanceMatrix dm(pc.size());
  for (std::size_t i = 0; i < pc.size(); ++i)
    for (std::size_t j = i + 1; j < pc.size(); ++j)
      dm.set(i, j, euclidean_distance(pc.point(i), pc.point(j)));
  return dm;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view field, std::size_t line) {
  field = trim(field);
  if (field.empty()) throw ParseError(line, "empty field");
  std::string buf(field);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size()) throw ParseError(line, "not a number: '" + buf + "'");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite value");
  return v;
}

}  // namespace

PointCloud parse_point_cloud(std::istream& in, const CsvOptions& options, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  std::vector<double> coords;
  bool header_pending = options.header;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::size_t fields = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = view.find(',', start);
      const auto field = view.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      coords.push_back(parse_real(field, line_no));
      ++fields;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (dim == 0) {
      dim = fields;
    } else if (fields != dim) {
      throw ParseError(line_no, "expected " + std::to_string(dim) + " columns, found " + std::to_string(fields));
    }
  }
  if (coords.empty()) throw EmptyFile(source);
  return PointCloud(dim, std::move(coords));
}

PointCloud load_point_cloud(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse_point_cloud(in, options, path);
}

void write_point_cloud(std::ostream& out, const PointCloud& pc) {
  char buf[32];
  for (std::size_t i = 0; i < pc.size(); ++i) {
    auto p = pc.point(i);
    for (std::size_t k = 0; k < p.size(); ++k) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p[k]);
      if (k) out << ',';
      out.write(buf, end - buf);
    }
    out << '\n';
  }
}

}  // namespace bettitest
