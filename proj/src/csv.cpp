#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include "fairshift/dataset.hpp"

namespace fairshift {

namespace {

std::mutex g_sink_mutex;
WarningSink g_sink;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

}  // namespace

void set_warning_sink(WarningSink sink) {
    std::lock_guard lock(g_sink_mutex);
    g_sink = std::move(sink);
}

void warn(const std::string& message) {
    std::lock_guard lock(g_sink_mutex);
    if (g_sink) {
        g_sink(message);
    } else {
        std::cerr << "warning: " << message << '\n';
    }
}

void Matrix::append_row(std::span<const double> values) {
    if (rows_ == 0 && cols_ == 0) {
        cols_ = values.size();
    }
    if (values.size() != cols_) {
        throw std::invalid_argument("Matrix::append_row: width mismatch");
    }
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
}

std::size_t RawTable::column_index(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw ValidationError("column '" + name + "' not found in table header");
    }
    return static_cast<std::size_t>(it - header.begin());
}

RawTable parse_csv(const std::string& text, const Schema& schema, const std::string& source) {
    RawTable table;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        if (line.find('"') != std::string::npos) {
            throw ValidationError(source + ":" + std::to_string(line_no) +
                                  ": quoted fields are not supported");
        }
        auto fields = split_fields(line);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw ValidationError(source + ":" + std::to_string(line_no) + ": data row " +
                                  std::to_string(table.rows.size() + 1) + " has " +
                                  std::to_string(fields.size()) + " fields, header has " +
                                  std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    if (!have_header) {
        throw ValidationError(source + ": empty file, no header row");
    }
    for (const auto& col : schema.columns) {
        if (std::find(table.header.begin(), table.header.end(), col.name) == table.header.end()) {
            throw ValidationError(source + ": schema column '" + col.name + "' is not in the header");
        }
    }
    return table;
}

RawTable load_csv(const std::filesystem::path& path, const Schema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open CSV file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), schema, path.string());
}

void save_encoded_csv(const EncodedDataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    for (const auto& name : data.feature_names) {
        out << name << ',';
    }
    out << "protected,label\n";
    char buf[32];
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (double v : data.features.row(i)) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << buf << ',';
        }
        out << data.protected_attr[i] << ',' << data.labels[i] << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed for '" + path.string() + "'");
    }
}

EncodedDataset load_encoded_csv(const std::filesystem::path& path, std::vector<FeatureBlock> blocks) {
    const RawTable raw = load_csv(path, Schema{});
    if (raw.header.size() < 4 || raw.header[raw.header.size() - 2] != "protected" ||
        raw.header.back() != "label") {
        throw ValidationError(path.string() + ": not an encoded dataset cache");
    }
    EncodedDataset data;
    const std::size_t d = raw.header.size() - 2;
    data.feature_names.assign(raw.header.begin(), raw.header.begin() + static_cast<std::ptrdiff_t>(d));
    data.features = Matrix(0, d);
    std::vector<double> row(d);
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        const auto& fields = raw.rows[r];
        try {
            for (std::size_t j = 0; j < d; ++j) {
                row[j] = std::stod(fields[j]);
            }
            data.protected_attr.push_back(std::stoi(fields[d]));
            data.labels.push_back(std::stoi(fields[d + 1]));
        } catch (const std::exception&) {
            throw ValidationError(path.string() + ": data row " + std::to_string(r) +
                                  " has a non-numeric field");
        }
        data.features.append_row(row);
    }
    data.blocks = std::move(blocks);
    data.validate();
    return data;
}

}  // namespace fairshift
