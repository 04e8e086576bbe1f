#include "spclust/data.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "spclust/errors.hpp"

namespace spclust {

void Dataset::validate() const {
  const Eigen::Index nn = n();
  if (nn == 0) throw IngestionError("dataset is empty");
  if (x.rows() != nn || coords.lon.size() != nn || coords.lat.size() != nn) {
    throw IngestionError("row counts of y, X, and coordinates disagree");
  }
  if (nn < p()) throw IngestionError("need n >= p");
  if (!y.allFinite() || !x.allFinite()) {
    throw IngestionError("non-finite values in y or X");
  }
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != nn) {
    throw IngestionError("name column length mismatch");
  }
}

Standardization standardize(Dataset& data) {
  data.validate();
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  Standardization s;
  s.x_mean.resize(p);
  s.x_sd.resize(p);

  auto scale = [n](Eigen::Ref<Eigen::VectorXd> v, double& mean, double& sd) {
    mean = v.mean();
    v.array() -= mean;
    sd = std::sqrt(v.squaredNorm() / static_cast<double>(n - 1));
    if (!(sd > 0.0)) throw IngestionError("constant column cannot be scaled");
    v /= sd;
  };

  scale(data.y, s.y_mean, s.y_sd);
  for (Eigen::Index j = 0; j < p; ++j) {
    Eigen::VectorXd col = data.x.col(j);
    scale(col, s.x_mean(j), s.x_sd(j));
    data.x.col(j) = col;
  }
  return s;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim whitespace and CR
    auto b = field.find_first_not_of(" \t\r");
    auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_num(const std::string& s, std::size_t row, const std::string& col) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IngestionError("non-numeric value '" + s + "' in column " + col +
                         ", row " + std::to_string(row));
  }
}

}  // namespace

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw IngestionError("empty CSV: " + path);
  auto header = split_csv_line(line);

  int y_col = -1, lon_col = -1, lat_col = -1, name_col = -1;
  std::vector<std::pair<int, int>> x_cols;  // (x index, column)
  for (int c = 0; c < static_cast<int>(header.size()); ++c) {
    const std::string& h = header[c];
    if (h == "y") y_col = c;
    else if (h == "lon") lon_col = c;
    else if (h == "lat") lat_col = c;
    else if (h == "name") name_col = c;
    else if (h.size() > 1 && h[0] == 'x') {
      try {
        x_cols.emplace_back(std::stoi(h.substr(1)), c);
      } catch (const std::exception&) {
        throw IngestionError("unrecognized column '" + h + "'");
      }
    } else {
      throw IngestionError("unrecognized column '" + h + "'");
    }
  }
  if (y_col < 0 || lon_col < 0 || lat_col < 0 || x_cols.empty()) {
    throw IngestionError("CSV must have columns y, x1..xp, lon, lat");
  }
  std::sort(x_cols.begin(), x_cols.end());
  for (std::size_t j = 0; j < x_cols.size(); ++j) {
    if (x_cols[j].first != static_cast<int>(j) + 1) {
      throw IngestionError("covariate columns must be consecutive x1..xp");
    }
  }
  const int p = static_cast<int>(x_cols.size());

  std::vector<double> ys, lons, lats;
  std::vector<std::vector<double>> xs;
  std::vector<std::string> names;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw IngestionError("row " + std::to_string(row) + " has " +
                           std::to_string(f.size()) + " fields, expected " +
                           std::to_string(header.size()));
    }
    ys.push_back(parse_num(f[y_col], row, "y"));
    lons.push_back(parse_num(f[lon_col], row, "lon"));
    lats.push_back(parse_num(f[lat_col], row, "lat"));
    std::vector<double> xr(p);
    for (int j = 0; j < p; ++j) {
      xr[j] = parse_num(f[x_cols[j].second], row, header[x_cols[j].second]);
    }
    xs.push_back(std::move(xr));
    if (name_col >= 0) names.push_back(f[name_col]);
  }
  if (ys.empty()) throw IngestionError("CSV has no data rows: " + path);

  Dataset d;
  const Eigen::Index n = static_cast<Eigen::Index>(ys.size());
  d.y = Eigen::Map<Eigen::VectorXd>(ys.data(), n);
  d.coords.lon = Eigen::Map<Eigen::VectorXd>(lons.data(), n);
  d.coords.lat = Eigen::Map<Eigen::VectorXd>(lats.data(), n);
  d.x.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) d.x(i, j) = xs[i][j];
  }
  d.names = std::move(names);
  d.validate();
  return d;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace spclust
