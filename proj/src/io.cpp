#include "pdbacktest/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace pdbt {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

long parse_long(const std::string& s, const std::string& ctx, int line_no) {
    long value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(ctx + ": line " + std::to_string(line_no) +
                         ": expected an integer, got '" + s + "'");
    return value;
}

double parse_double(const std::string& s, const std::string& ctx, int line_no) {
    try {
        std::size_t pos = 0;
        const double value = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return value;
    } catch (const std::exception&) {
        throw ParseError(ctx + ": line " + std::to_string(line_no) +
                         ": expected a number, got '" + s + "'");
    }
}

// Shortest representation that round-trips through double.
std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    double back = 0.0;
    std::istringstream(os.str()) >> back;
    if (back == v) {
        for (int prec = 1; prec < 17; ++prec) {
            std::ostringstream shorter;
            shorter << std::setprecision(prec) << v;
            double b2 = 0.0;
            std::istringstream(shorter.str()) >> b2;
            if (b2 == v) return shorter.str();
        }
    }
    return os.str();
}

std::string blank_or(double v, bool blank) { return blank ? "" : format_double(v); }

}  // namespace

ValidationSample read_validation_csv(std::istream& in, const std::string& name) {
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line))
        throw ParseError(name + ": empty file");
    ++line_no;
    auto header = split_csv_line(line);
    for (auto& h : header) {
        std::transform(h.begin(), h.end(), h.begin(),
                       [](unsigned char c) { return std::tolower(c); });
    }
    const std::vector<std::string> required = {"class", "label", "n", "pd", "defaults"};
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const auto& r : required)
        if (!col.count(r))
            throw ParseError(name + ": line 1: missing column '" + r + "'");
    const bool has_unit = col.count("unit") > 0;

    ValidationSample sample;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < required.size() + (has_unit ? 1 : 0))
            throw ParseError(name + ": line " + std::to_string(line_no) +
                             ": expected " +
                             std::to_string(required.size() + (has_unit ? 1 : 0)) +
                             " fields, got " + std::to_string(fields.size()));
        ClassRecord rec;
        rec.id = static_cast<int>(parse_long(fields[col["class"]], name, line_no));
        rec.label = fields[col["label"]];
        rec.n = parse_long(fields[col["n"]], name, line_no);
        rec.pd = parse_double(fields[col["pd"]], name, line_no);
        rec.defaults = parse_long(fields[col["defaults"]], name, line_no);
        if (has_unit) {
            const std::string unit = fields[col["unit"]];
            if (unit == "bps") {
                rec.pd /= 1e4;
            } else if (unit != "prob" && !unit.empty()) {
                throw ParseError(name + ": line " + std::to_string(line_no) +
                                 ": unknown pd unit '" + unit + "' (prob or bps)");
            }
        }
        if (rec.n < 0)
            throw DataError(name + ": line " + std::to_string(line_no) +
                            ": n must be >= 0");
        if (rec.defaults < 0 || rec.defaults > rec.n)
            throw DataError(name + ": line " + std::to_string(line_no) +
                            ": defaults must lie in 0..n");
        if (rec.n > 0 && !(rec.pd > 0.0 && rec.pd < 1.0))
            throw DataError(name + ": line " + std::to_string(line_no) +
                            ": pd must lie in (0,1)");
        sample.classes.push_back(std::move(rec));
    }
    if (sample.classes.empty()) throw DataError(name + ": no data rows");
    return sample;
}

ValidationSample read_validation_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open input file: " + path);
    return read_validation_csv(in, path);
}

void write_report_csv(std::ostream& out, const ValidationSample& sample,
                      const AdjustmentReport& report, std::optional<double> hl_pvalue) {
    out << "class,label,n,pd,defaults,p_value";
    for (Method m : report.methods) out << "," << method_label(m);
    for (Method m : report.methods) out << ",reject_" << method_label(m);
    out << "\n";

    std::size_t tested_idx = 0;
    for (const auto& c : sample.classes) {
        const bool blank = c.n == 0;
        out << c.id << "," << c.label << "," << c.n << "," << format_double(c.pd)
            << "," << c.defaults;
        out << "," << blank_or(blank ? 0.0 : report.raw[tested_idx], blank);
        for (std::size_t mi = 0; mi < report.methods.size(); ++mi)
            out << "," << blank_or(blank ? 0.0 : report.adjusted[mi][tested_idx], blank);
        for (std::size_t mi = 0; mi < report.methods.size(); ++mi)
            out << "," << (blank ? "" : (report.reject(mi, tested_idx) ? "1" : "0"));
        out << "\n";
        if (!blank) ++tested_idx;
    }
    if (hl_pvalue)
        out << "# hl_p_value," << format_double(*hl_pvalue) << "\n";
}

void write_report_json(std::ostream& out, const ValidationSample& sample,
                       const AdjustmentReport& report, std::optional<double> hl_pvalue) {
    nlohmann::json doc;
    doc["alpha"] = report.alpha;
    doc["family_size"] = report.classes.size();
    auto& rows = doc["classes"];
    rows = nlohmann::json::array();
    std::size_t tested_idx = 0;
    for (const auto& c : sample.classes) {
        nlohmann::json row;
        row["class"] = c.id;
        row["label"] = c.label;
        row["n"] = c.n;
        row["pd"] = c.pd;
        row["defaults"] = c.defaults;
        if (c.n == 0) {
            row["p_value"] = nullptr;
        } else {
            row["p_value"] = report.raw[tested_idx];
            nlohmann::json adjusted, reject;
            for (std::size_t mi = 0; mi < report.methods.size(); ++mi) {
                const std::string key(method_label(report.methods[mi]));
                adjusted[key] = report.adjusted[mi][tested_idx];
                reject[key] = report.reject(mi, tested_idx);
            }
            row["adjusted"] = std::move(adjusted);
            row["reject"] = std::move(reject);
            ++tested_idx;
        }
        rows.push_back(std::move(row));
    }
    if (hl_pvalue) doc["hl_p_value"] = *hl_pvalue;
    out << doc.dump(2) << "\n";
}

namespace {

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string token;
    std::stringstream ss(value);
    while (ss >> token) {
        // allow comma separators as well
        std::stringstream inner(token);
        std::string piece;
        while (std::getline(inner, piece, ',')) {
            piece = trim(piece);
            if (!piece.empty()) out.push_back(piece);
        }
    }
    return out;
}

}  // namespace

ExperimentConfig read_experiment_config(std::istream& in, const std::string& name) {
    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(name + ": line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(name + ": line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        if (kv.count(key))
            throw ConfigError(name + ": duplicate key '" + key + "'");
        kv[key] = value;
    }

    const auto require = [&](const std::string& key) -> std::string {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw ConfigError(name + ": missing required field '" + key + "'");
        return it->second;
    };
    const auto to_double = [&](const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw ConfigError(name + ": field '" + key + "': expected a number, got '" +
                              v + "'");
        }
    };

    ExperimentConfig config;
    for (const auto& tok : split_list(require("sizes")))
        config.portfolio_sizes.push_back(static_cast<int>(to_double("sizes", tok)));

    const std::string alternative = require("alternative");
    if (alternative == "shift") {
        config.alternative = AlternativeKind::shift;
    } else if (alternative == "dispersion") {
        config.alternative = AlternativeKind::dispersion;
    } else {
        throw ConfigError(name + ": field 'alternative': expected shift or dispersion, got '" +
                          alternative + "'");
    }
    for (const auto& tok : split_list(require("values")))
        config.values.push_back(to_double("values", tok));
    config.alpha = to_double("alpha", require("alpha"));
    config.n_sim = static_cast<int>(to_double("n_sim", require("n_sim")));
    config.seed = static_cast<std::uint64_t>(to_double("seed", require("seed")));

    for (const auto& tok : split_list(require("methods"))) {
        const auto m = parse_method(tok);
        if (!m)
            throw ConfigError(name + ": unknown method '" + tok + "'; valid methods: " +
                              valid_method_names());
        config.methods.push_back(*m);
    }

    if (kv.count("rho")) config.rho = to_double("rho", kv["rho"]);
    if (kv.count("hl_sims"))
        config.hl_sims = static_cast<int>(to_double("hl_sims", kv["hl_sims"]));
    if (kv.count("threads"))
        config.threads = static_cast<int>(to_double("threads", kv["threads"]));
    if (kv.count("portfolio_file")) {
        config.fixed_counts =
            read_counts_csv_file(kv["portfolio_file"], PortfolioSpec::prototype().size());
    }

    const std::vector<std::string> known = {
        "sizes", "alternative", "values",  "alpha",   "n_sim",
        "seed",  "methods",     "rho",     "hl_sims", "threads",
        "portfolio_file"};
    for (const auto& [key, value] : kv)
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError(name + ": unknown field '" + key + "'");

    try {
        config.validate();
    } catch (const std::domain_error& e) {
        throw ConfigError(name + ": " + e.what());
    }
    return config;
}

ExperimentConfig read_experiment_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return read_experiment_config(in, path);
}

namespace {

nlohmann::json identification_rows(const ExperimentResult& result) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& cell : result.cells) {
        for (const auto& st : cell.methods) {
            nlohmann::json row;
            row["method"] = std::string(method_label(st.method));
            row["n_pf"] = cell.n_pf;
            row["alt_value"] = cell.alt_value;
            row["avg_rejections"] = st.avg_rejections;
            row["avg_rejections_se"] = st.avg_rejections_se;
            row["global_rate"] = st.global_rate;
            row["fdr"] = st.fdr;
            nlohmann::json rates;
            for (std::size_t j = 0; j < cell.class_ids.size(); ++j)
                rates[std::to_string(cell.class_ids[j])] = st.class_rates[j];
            row["class_rates"] = std::move(rates);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace

void write_identification_tables(std::ostream& out, const ExperimentResult& result,
                                 ReportFormat format) {
    if (format == ReportFormat::json) {
        out << identification_rows(result).dump(2) << "\n";
        return;
    }
    out << "method,n_pf,alt_value,class,rejection_rate,avg_rejections,avg_rejections_se,"
           "global_rate,fdr\n";
    for (const auto& cell : result.cells) {
        for (const auto& st : cell.methods) {
            for (std::size_t j = 0; j < cell.class_ids.size(); ++j) {
                out << method_label(st.method) << "," << cell.n_pf << ","
                    << format_double(cell.alt_value) << "," << cell.class_ids[j] << ","
                    << format_double(st.class_rates[j]) << ","
                    << format_double(st.avg_rejections) << ","
                    << format_double(st.avg_rejections_se) << ","
                    << format_double(st.global_rate) << "," << format_double(st.fdr)
                    << "\n";
            }
        }
    }
}

void write_power_tables(std::ostream& out, const ExperimentResult& result,
                        ReportFormat format) {
    if (format == ReportFormat::json) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& cell : result.cells) {
            for (const auto& st : cell.methods) {
                nlohmann::json row;
                row["method"] = std::string(method_label(st.method));
                row["n_pf"] = cell.n_pf;
                row["alt_value"] = cell.alt_value;
                row["power"] = st.global_rate;
                rows.push_back(std::move(row));
            }
            nlohmann::json row;
            row["method"] = "hl";
            row["n_pf"] = cell.n_pf;
            row["alt_value"] = cell.alt_value;
            row["power"] = cell.hl_rate;
            rows.push_back(std::move(row));
        }
        out << rows.dump(2) << "\n";
        return;
    }
    out << "method,n_pf,alt_value,power\n";
    for (const auto& cell : result.cells) {
        for (const auto& st : cell.methods)
            out << method_label(st.method) << "," << cell.n_pf << ","
                << format_double(cell.alt_value) << "," << format_double(st.global_rate)
                << "\n";
        out << "hl," << cell.n_pf << "," << format_double(cell.alt_value) << ","
            << format_double(cell.hl_rate) << "\n";
    }
}

std::vector<long> read_counts_csv_file(const std::string& path, int expected_k) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open counts file: " + path);
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    ++line_no;
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "class" || header[1] != "count")
        throw ParseError(path + ": line 1: expected header class,count");
    std::vector<long> counts(static_cast<std::size_t>(expected_k), -1);
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < 2)
            throw ParseError(path + ": line " + std::to_string(line_no) +
                             ": expected class,count");
        const long cls = parse_long(fields[0], path, line_no);
        const long count = parse_long(fields[1], path, line_no);
        if (cls < 1 || cls > expected_k)
            throw DataError(path + ": line " + std::to_string(line_no) +
                            ": class outside 1.." + std::to_string(expected_k));
        if (count < 0)
            throw DataError(path + ": line " + std::to_string(line_no) +
                            ": count must be >= 0");
        counts[static_cast<std::size_t>(cls - 1)] = count;
    }
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (counts[i] < 0)
            throw DataError(path + ": missing row for class " + std::to_string(i + 1));
    return counts;
}

}  // namespace pdbt
