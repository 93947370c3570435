#include "permreg/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "permreg/errors.hpp"

namespace permreg {

int TabularDataset::column_position(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

Eigen::VectorXd TabularDataset::numeric_column(const std::string& name) const {
    const int pos = column_position(name);
    if (pos < 0) throw ParameterError("column '" + name + "' not found");
    const int vi = value_index[static_cast<std::size_t>(pos)];
    if (vi < 0) throw ParameterError("column '" + name + "' is the block column, not numeric");
    return values.col(vi);
}

namespace {

bool is_excluded(const std::string& name, const std::vector<std::string>& excluded) {
    for (const auto& e : excluded)
        if (e == name) return true;
    return false;
}

}  // namespace

Eigen::MatrixXd TabularDataset::numeric_matrix_excluding(
    const std::vector<std::string>& excluded) const {
    const auto names = numeric_names_excluding(excluded);
    Eigen::MatrixXd out(values.rows(), static_cast<Eigen::Index>(names.size()));
    for (std::size_t j = 0; j < names.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = numeric_column(names[j]);
    return out;
}

std::vector<std::string> TabularDataset::numeric_names_excluding(
    const std::vector<std::string>& excluded) const {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (value_index[i] >= 0 && !is_excluded(columns[i], excluded)) names.push_back(columns[i]);
    return names;
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, int row, const std::string& column) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end)
        throw ParseError("row " + std::to_string(row) + ", column '" + column +
                         "': cannot parse '" + cell + "' as a number");
    return value;
}

}  // namespace

TabularDataset load_csv(const std::string& path, const std::string& block_column) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line)) throw ParseError("'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    TabularDataset data;
    data.columns = split_line(line);
    if (data.columns.empty()) throw ParseError("'" + path + "' has an empty header");

    int block_pos = -1;
    if (!block_column.empty()) {
        block_pos = data.column_position(block_column);
        if (block_pos < 0)
            throw ParameterError("block column '" + block_column + "' not found in '" + path + "'");
        data.block_column = block_column;
    }
    data.value_index.assign(data.columns.size(), -1);
    int vi = 0;
    for (std::size_t i = 0; i < data.columns.size(); ++i)
        if (static_cast<int>(i) != block_pos) data.value_index[i] = vi++;

    std::vector<std::vector<double>> rows;
    int row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        const auto cells = split_line(line);
        if (cells.size() != data.columns.size())
            throw ParseError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                             " cells, expected " + std::to_string(data.columns.size()));
        std::vector<double> numeric(static_cast<std::size_t>(vi));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (static_cast<int>(i) == block_pos)
                data.block_labels.push_back(cells[i]);
            else
                numeric[static_cast<std::size_t>(data.value_index[i])] = parse_cell(cells[i], row, data.columns[i]);
        }
        rows.push_back(std::move(numeric));
    }

    data.values.resize(static_cast<Eigen::Index>(rows.size()), vi);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (int c = 0; c < vi; ++c) data.values(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
    return data;
}

void write_csv(const TabularDataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");

    for (std::size_t i = 0; i < data.columns.size(); ++i) {
        if (i) out << ',';
        out << data.columns[i];
    }
    out << '\n';

    for (int r = 0; r < data.n_rows(); ++r) {
        for (std::size_t i = 0; i < data.columns.size(); ++i) {
            if (i) out << ',';
            const int vi = data.value_index[i];
            if (vi < 0)
                out << data.block_labels[static_cast<std::size_t>(r)];
            else
                out << format_double(data.values(r, vi));
        }
        out << '\n';
    }
    if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace permreg
