#include "output.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "dicke/meanfield.hpp"

#ifndef DICKE_VERSION
#define DICKE_VERSION "0.0.0"
#endif

namespace dicke::app {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string iso_utc(std::chrono::system_clock::time_point t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return nullptr;
            } else if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) return nullptr;
                return v;
            } else {
                return v;
            }
        },
        c);
}

} // namespace

const char* tool_version() { return DICKE_VERSION; }

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw std::logic_error("table '" + name + "': row has " + std::to_string(row.size()) + " cells, expected " +
                               std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
        if (j) out += ',';
        out += csv_field(t.columns[j]);
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ',';
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) out += format_double(v);
                    else if constexpr (std::is_same_v<T, long long>) out += std::to_string(v);
                    else if constexpr (std::is_same_v<T, std::string>) out += csv_field(v);
                },
                row[j]);
        }
        out += '\n';
    }
    return out;
}

Json to_json(const Table& t) {
    Json j;
    j["name"] = t.name;
    j["description"] = t.description;
    j["columns"] = t.columns;
    Json rows = Json::array();
    for (const auto& row : t.rows) {
        Json r = Json::array();
        for (const auto& c : row) r.push_back(cell_json(c));
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256: EVP_Digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

Json params_json(const DickeParamsd& p) {
    Json j;
    j["omega"] = p.omega;
    j["omega0"] = p.omega0;
    j["lambda"] = p.lambda;
    j["lambda_prime"] = p.lambda_prime;
    j["kappa"] = p.kappa;
    j["atom_number"] = p.atom_number;
    j["critical_coupling"] = critical_coupling(p);
    return j;
}

Json physical_json(const PhysicalParamsd& p) {
    Json j;
    j["pump_cavity_detuning"] = p.pump_cavity_detuning;
    j["dispersive_shift"] = p.dispersive_shift;
    j["pump_coupling"] = p.pump_coupling;
    j["cavity_decay"] = p.cavity_decay;
    j["atom_number"] = p.atom_number;
    j["condensate_length"] = p.condensate_length;
    j["cavity_length"] = p.cavity_length;
    j["trap_displacement"] = p.trap_displacement;
    j["cavity_wavevector"] = p.cavity_wavevector;
    j["atom_mass"] = p.atom_mass;
    j["max_displacement_fraction"] = p.max_displacement_fraction;
    if (p.atom_cavity_coupling) j["atom_cavity_coupling"] = *p.atom_cavity_coupling;
    if (p.pump_rabi_frequency) j["pump_rabi_frequency"] = *p.pump_rabi_frequency;
    if (p.atomic_detuning) j["atomic_detuning"] = *p.atomic_detuning;
    j["recoil_frequency"] = recoil_frequency(p);
    return j;
}

OutputWriter::OutputWriter(std::filesystem::path dir, Format format, std::string command, std::string config_text)
    : dir_(std::move(dir)),
      format_(format),
      command_(std::move(command)),
      config_text_(std::move(config_text)),
      start_(std::chrono::system_clock::now()),
      start_steady_(std::chrono::steady_clock::now()) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir_.string() + "': " + ec.message());
}

void OutputWriter::put(const std::string& file_name, const std::string& content) {
    const auto path = dir_ / file_name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
    files_.push_back(file_name);
    hashes_.push_back(sha256_hex(content));
}

void OutputWriter::write(const Table& t) {
    if (format_ != Format::json) put(t.name + ".csv", to_csv(t));
    if (format_ != Format::csv) put(t.name + ".json", to_json(t).dump(1) + "\n");
}

void OutputWriter::write_text(const std::string& file_name, const std::string& content) { put(file_name, content); }

void OutputWriter::write_params(const DickeParamsd& p, const std::optional<PhysicalParamsd>& physical, const Json& extra) {
    Json j;
    j["dicke"] = params_json(p);
    if (physical) j["physical"] = physical_json(*physical);
    if (!extra.is_null()) j["run"] = extra;
    put("params.json", j.dump(1) + "\n");
    params_ = std::move(j);
}

void OutputWriter::finish() {
    const auto end = std::chrono::system_clock::now();
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_steady_).count();
    Json m;
    m["tool"] = "dicke";
    m["version"] = tool_version();
    m["command"] = command_;
    m["config_sha256"] = sha256_hex(config_text_);
    m["parameters"] = params_;
    m["started_utc"] = iso_utc(start_);
    m["finished_utc"] = iso_utc(end);
    m["wall_seconds"] = elapsed;
    Json files = Json::array();
    for (std::size_t i = 0; i < files_.size(); ++i) {
        Json f;
        f["file"] = files_[i];
        f["sha256"] = hashes_[i];
        files.push_back(std::move(f));
    }
    m["files"] = std::move(files);
    m["warnings"] = warnings_;
    const auto path = dir_ / "manifest.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << m.dump(1) << "\n";
}

} // namespace dicke::app
