// output.hpp: tables, CSV/JSON writers and the run manifest

#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace dicke::app {

using Json = nlohmann::ordered_json;

// Empty cells print as an empty CSV field and as JSON null.
using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::string name;                  // file stem
    std::string description;
    std::vector<std::string> columns;  // headers carry units, e.g. "lambda [omega0]"
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);   // throws std::logic_error on a width mismatch
};

std::string format_double(double v);   // %.15g; nan, inf and -inf spelled out
std::string to_csv(const Table& t);
Json to_json(const Table& t);

std::string sha256_hex(const std::string& bytes);

// Writes every artefact of one run into a single directory and records checksums.
// Data files are byte-identical across runs with the same config; only the
// manifest carries wall-clock fields.
class OutputWriter {
public:
    OutputWriter(std::filesystem::path dir, Format format, std::string command, std::string config_text);

    void write(const Table& t);
    void write_text(const std::string& file_name, const std::string& content);
    void write_params(const DickeParamsd& p, const std::optional<PhysicalParamsd>& physical, const Json& extra = {});
    void add_warning(const std::string& w) { warnings_.push_back(w); }
    void finish();

    const std::filesystem::path& dir() const { return dir_; }
    const std::vector<std::string>& files() const { return files_; }

private:
    std::filesystem::path dir_;
    Format format_;
    std::string command_;
    std::string config_text_;
    std::chrono::system_clock::time_point start_;
    std::chrono::steady_clock::time_point start_steady_;
    std::vector<std::string> files_;
    std::vector<std::string> hashes_;
    std::vector<std::string> warnings_;
    Json params_;

    void put(const std::string& file_name, const std::string& content);
};

Json params_json(const DickeParamsd& p);
Json physical_json(const PhysicalParamsd& p);

const char* tool_version();

} // namespace dicke::app
