#include "twistor/matrix_json.hpp"

#include <cmath>
#include <stdexcept>

namespace twistor {

nlohmann::ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument("matrix JSON must be a non-empty array of rows");
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) {
    throw std::invalid_argument("matrix JSON rows must be non-empty arrays");
  }
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::invalid_argument("matrix JSON rows must all have equal length");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      const auto& cell = row[static_cast<std::size_t>(k)];
      if (!cell.is_number()) {
        throw std::invalid_argument("matrix JSON entries must be numbers");
      }
      const double v = cell.get<double>();
      if (!std::isfinite(v)) {
        throw std::invalid_argument("matrix JSON entries must be finite");
      }
      m(i, k) = v;
    }
  }
  return m;
}

Eigen::MatrixXd square_even_matrix_from_json(const nlohmann::json& j) {
  Eigen::MatrixXd m = matrix_from_json(j);
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("matrix must be square");
  }
  if (m.rows() % 2 != 0) {
    throw std::invalid_argument("matrix order must be even");
  }
  return m;
}

}  // namespace twistor
