#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace permreg {

/// A rectangular table of doubles with named columns. At most one column (the
/// "block" column, a quasi-identifier) may hold arbitrary text; every other
/// cell must parse as a double.
struct TabularDataset {
    std::vector<std::string> columns;       // all column names, file order
    Eigen::MatrixXd values;                 // n x (number of numeric columns)
    std::vector<int> value_index;           // per column: index into values, or -1 for the block column
    std::string block_column;               // empty if none
    std::vector<std::string> block_labels;  // size n when block_column set

    int n_rows() const { return static_cast<int>(values.rows()); }
    int column_position(const std::string& name) const;  // -1 if absent
    /// Numeric column by name; throws if absent or non-numeric.
    Eigen::VectorXd numeric_column(const std::string& name) const;
    /// All numeric columns except the listed ones, in file order.
    Eigen::MatrixXd numeric_matrix_excluding(const std::vector<std::string>& excluded) const;
    std::vector<std::string> numeric_names_excluding(const std::vector<std::string>& excluded) const;
};

/// Shortest round-trip decimal formatting of a double.
std::string format_double(double v);

/// Reads a comma-separated file with a header row. If block_column is
/// nonempty that column is kept as text; all other cells must be numeric.
TabularDataset load_csv(const std::string& path, const std::string& block_column = "");

/// Writes the dataset back; numeric cells use shortest round-trip formatting.
void write_csv(const TabularDataset& data, const std::string& path);

}  // namespace permreg
