#pragma once

// JSON exchange format for dense real matrices: an array of rows, each row an
// array of finite doubles.  This is the on-disk format used by the CLI for
// matrices and field specifications.

#include <Eigen/Dense>
#include <json.hpp>

namespace twistor {

// Serialize a matrix as an array of rows.
nlohmann::ordered_json matrix_to_json(const Eigen::MatrixXd& m);

// Parse an array-of-rows matrix.  Throws std::invalid_argument on ragged
// rows, empty input, or non-finite entries.
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

// Parse a matrix that is required to be square with even order, as expected
// for linear complex structures.  Rejects non-square or odd-order input.
Eigen::MatrixXd square_even_matrix_from_json(const nlohmann::json& j);

}  // namespace twistor
