#include "gf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "gf/error.hpp"
#include "gf/rng.hpp"

namespace gf {

std::vector<std::uint64_t> seeds_from_master(std::uint64_t master, std::size_t n) {
    std::vector<std::uint64_t> seeds(n);
    for (std::size_t i = 0; i < n; ++i) seeds[i] = derive_seed(master, 0x1000 + i);
    return seeds;
}

ExperimentMatrix matrix_from_json(const Json& j, const GameConfig& base) {
    static const std::vector<std::string> known{"conditions", "profiles", "seeds",     "n",     "master_seed",
                                                "with_training", "time_cap", "resamples", "level", "config",
                                                "bootstrap_seed"};
    if (!j.is_object()) throw Error("invalid-config", "experiment matrix must be a JSON object");
    for (const auto& [k, _] : j.items()) {
        if (std::find(known.begin(), known.end(), k) == known.end()) {
            throw Error("invalid-config", "unknown matrix field '" + k + "'");
        }
    }
    try {
        ExperimentMatrix m;
        m.base_config = j.contains("config") ? apply_overrides(base, j.at("config")) : base;
        if (auto it = j.find("conditions"); it != j.end()) {
            m.conditions.clear();
            for (const auto& c : *it) m.conditions.push_back(parse_condition(c.get<std::string>()));
        }
        if (auto it = j.find("profiles"); it != j.end()) {
            for (const auto& p : *it) {
                if (p.is_string()) {
                    m.profiles.push_back(builtin_profile(p.get<std::string>()));
                } else {
                    const AgentProfile b = p.contains("base") ? builtin_profile(p.at("base").get<std::string>()) : AgentProfile{};
                    m.profiles.push_back(profile_from_json(p, b));
                }
            }
        } else {
            m.profiles.push_back(builtin_profile("young_gullible"));
        }
        if (auto it = j.find("seeds"); it != j.end()) {
            m.seeds = it->get<std::vector<std::uint64_t>>();
        } else {
            const auto n = j.value("n", std::size_t{200});
            m.seeds = seeds_from_master(j.value("master_seed", std::uint64_t{1}), n);
        }
        if (j.value("with_training", false)) m.session.start = StartMode::WithTraining;
        m.session.time_cap = j.value("time_cap", m.session.time_cap);
        m.resamples = j.value("resamples", m.resamples);
        m.level = j.value("level", m.level);
        m.bootstrap_seed = j.value("bootstrap_seed", m.bootstrap_seed);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error("invalid-config", std::string("experiment matrix: ") + e.what());
    }
}

namespace {

struct Task {
    std::size_t cell;
    std::size_t seed;
};

} // namespace

std::vector<CellResult> run_cells(const ExperimentMatrix& matrix, unsigned jobs) {
    if (matrix.seeds.size() < 2) {
        throw Error("insufficient-samples", "need at least 2 seeds per cell, got " + std::to_string(matrix.seeds.size()));
    }
    if (matrix.conditions.empty() || matrix.profiles.empty()) {
        throw Error("invalid-config", "experiment matrix needs at least one condition and one profile");
    }

    std::vector<CellResult> cells;
    std::vector<GameConfig> configs;
    for (Condition c : matrix.conditions) {
        GameConfig cfg = matrix.base_config;
        cfg.condition = c;
        validate(cfg);
        for (const auto& p : matrix.profiles) {
            validate(p, cfg);
            cells.push_back({c, p.name, std::vector<Metrics>(matrix.seeds.size())});
            configs.push_back(cfg);
        }
    }

    const std::size_t per_cell = matrix.seeds.size();
    const std::size_t total = cells.size() * per_cell;
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::size_t err_index = total;
    std::exception_ptr err;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= total) return;
            const Task t{i / per_cell, i % per_cell};
            const auto& profile = matrix.profiles[t.cell % matrix.profiles.size()];
            const std::uint64_t seed = matrix.seeds[t.seed];
            try {
                const SessionLog log = run_session(configs[t.cell], profile, {seed, seed}, matrix.session);
                cells[t.cell].sessions[t.seed] = compute_metrics(log, profile, matrix.exertion);
            } catch (const Error& e) {
                std::lock_guard lock(err_mu);
                if (i < err_index) {
                    err_index = i;
                    err = std::make_exception_ptr(Error(
                        e.code(), "condition=" + std::string(to_string(cells[t.cell].condition)) + " profile=" +
                                      profile.name + " seed=" + std::to_string(seed) + ": " + e.detail()));
                }
            } catch (...) {
                std::lock_guard lock(err_mu);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };

    const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(total)));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned k = 0; k < n_threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (err) std::rethrow_exception(err);
    return cells;
}

std::string_view to_string(RowKind k) noexcept { return k == RowKind::Cell ? "cell" : "difference"; }

RowKind parse_row_kind(std::string_view s) {
    if (s == "cell") return RowKind::Cell;
    if (s == "difference") return RowKind::Difference;
    throw Error("bad-value", "unknown row kind '" + std::string(s) + "'");
}

TableFormat parse_table_format(std::string_view s) {
    if (s == "csv") return TableFormat::Csv;
    if (s == "jsonl") return TableFormat::Jsonl;
    throw Error("bad-value", "unknown table format '" + std::string(s) + "'");
}

const SummaryRow* SummaryTable::find(RowKind kind, std::string_view condition, std::string_view profile,
                                     std::string_view metric) const {
    for (const auto& r : rows) {
        if (r.kind == kind && r.condition == condition && r.profile == profile && r.metric == metric) return &r;
    }
    return nullptr;
}

namespace {

// Values of one metric across a cell's sessions, skipping sessions where it is undefined.
std::vector<std::vector<double>> metric_columns(const CellResult& cell) {
    const auto& names = metric_names();
    std::vector<std::vector<double>> cols(names.size());
    for (const auto& m : cell.sessions) {
        const auto flat = flatten(m);
        for (std::size_t k = 0; k < flat.size(); ++k) {
            if (flat[k].second) cols[k].push_back(*flat[k].second);
        }
    }
    return cols;
}

const CellResult* find_cell(const std::vector<CellResult>& cells, Condition c, std::string_view profile) {
    for (const auto& cell : cells) {
        if (cell.condition == c && cell.profile == profile) return &cell;
    }
    return nullptr;
}

} // namespace

SummaryTable summarize(const ExperimentMatrix& matrix, const std::vector<CellResult>& cells) {
    const auto& names = metric_names();
    SummaryTable t;
    for (const auto& cell : cells) {
        const auto cols = metric_columns(cell);
        for (std::size_t k = 0; k < names.size(); ++k) {
            if (cols[k].empty()) continue;
            t.rows.push_back({RowKind::Cell, std::string(to_string(cell.condition)), cell.profile, names[k],
                              static_cast<std::int64_t>(cols[k].size()), mean(cols[k]), sample_sd(cols[k]), std::nullopt});
        }
    }

    for (std::size_t p = 0; p < matrix.profiles.size(); ++p) {
        const auto& name = matrix.profiles[p].name;
        const CellResult* unc = find_cell(cells, Condition::Uncertain, name);
        const CellResult* cer = find_cell(cells, Condition::Certain, name);
        if (!unc || !cer) continue;
        const auto a = metric_columns(*unc);
        const auto b = metric_columns(*cer);
        for (std::size_t k = 0; k < names.size(); ++k) {
            if (a[k].size() < 2 || b[k].size() < 2) continue;
            const double sa = sample_sd(a[k]);
            const double sb = sample_sd(b[k]);
            const double se = std::sqrt(sa * sa / static_cast<double>(a[k].size()) + sb * sb / static_cast<double>(b[k].size()));
            const std::uint64_t seed = derive_seed(derive_seed(matrix.bootstrap_seed, p), k);
            t.rows.push_back({RowKind::Difference, std::string(kDifferenceLabel), name, names[k],
                              static_cast<std::int64_t>(std::min(a[k].size(), b[k].size())), mean(a[k]) - mean(b[k]), se,
                              bootstrap_diff_ci(a[k], b[k], matrix.resamples, matrix.level, seed)});
        }
    }
    return t;
}

SummaryTable run_experiment(const ExperimentMatrix& matrix, unsigned jobs) {
    return summarize(matrix, run_cells(matrix, jobs));
}

namespace {

const char* const kCsvHeader = "kind,condition,profile,metric,n,mean,sd,ci_low,ci_high,ci_level";

std::string fmt(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

double parse_double(std::string_view s, std::string_view what) {
    double x = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
        throw Error("malformed-table", "bad number '" + std::string(s) + "' in " + std::string(what));
    }
    return x;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// RFC 4180 records; quoted fields may contain separators and line breaks.
std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> rec;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"' && field.empty()) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            rec.push_back(std::move(field));
            field.clear();
            field_started = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (field_started || !field.empty() || !rec.empty()) {
                rec.push_back(std::move(field));
                records.push_back(std::move(rec));
            }
            rec.clear();
            field.clear();
            field_started = false;
        } else {
            field += c;
            field_started = true;
        }
    }
    if (quoted) throw Error("malformed-table", "unterminated quoted field");
    if (field_started || !field.empty() || !rec.empty()) {
        rec.push_back(std::move(field));
        records.push_back(std::move(rec));
    }
    return records;
}

Json row_json(const SummaryRow& r) {
    Json j;
    j["kind"] = to_string(r.kind);
    j["condition"] = r.condition;
    j["profile"] = r.profile;
    j["metric"] = r.metric;
    j["n"] = r.n;
    j["mean"] = r.mean;
    j["sd"] = r.sd;
    j["ci"] = r.ci ? Json{{"low", r.ci->low}, {"high", r.ci->high}, {"level", r.ci->level}} : Json(nullptr);
    return j;
}

} // namespace

std::string to_csv(const SummaryTable& t) {
    std::string out = kCsvHeader;
    out += "\r\n";
    for (const auto& r : t.rows) {
        out += std::string(to_string(r.kind)) + ',' + csv_field(r.condition) + ',' + csv_field(r.profile) + ',' +
               csv_field(r.metric) + ',' + std::to_string(r.n) + ',' + fmt(r.mean) + ',' + fmt(r.sd) + ',';
        if (r.ci) out += fmt(r.ci->low) + ',' + fmt(r.ci->high) + ',' + fmt(r.ci->level);
        else out += ",,";
        out += "\r\n";
    }
    return out;
}

std::string to_jsonl(const SummaryTable& t) {
    std::string out;
    for (const auto& r : t.rows) {
        out += row_json(r).dump();
        out += '\n';
    }
    return out;
}

SummaryTable table_from_csv(std::string_view text) {
    const auto records = parse_csv(text);
    if (records.empty()) throw Error("malformed-table", "missing CSV header");
    std::string header;
    for (std::size_t i = 0; i < records[0].size(); ++i) header += (i ? "," : "") + records[0][i];
    if (header != kCsvHeader) throw Error("malformed-table", "unexpected CSV header '" + header + "'");
    SummaryTable t;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& f = records[i];
        const std::string where = "row " + std::to_string(i);
        if (f.size() != 10) throw Error("malformed-table", where + ": expected 10 fields, got " + std::to_string(f.size()));
        SummaryRow r;
        try {
            r.kind = parse_row_kind(f[0]);
        } catch (const Error& e) {
            throw Error("malformed-table", where + ": " + e.detail());
        }
        r.condition = f[1];
        r.profile = f[2];
        r.metric = f[3];
        r.n = static_cast<std::int64_t>(parse_double(f[4], where));
        r.mean = parse_double(f[5], where);
        r.sd = parse_double(f[6], where);
        if (!f[7].empty() || !f[8].empty() || !f[9].empty()) {
            r.ci = ConfidenceInterval{parse_double(f[7], where), parse_double(f[8], where), parse_double(f[9], where)};
        }
        t.rows.push_back(std::move(r));
    }
    return t;
}

SummaryTable table_from_jsonl(std::string_view text) {
    SummaryTable t;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty()) continue;
        try {
            const Json j = Json::parse(line);
            SummaryRow r;
            r.kind = parse_row_kind(j.at("kind").get<std::string>());
            r.condition = j.at("condition").get<std::string>();
            r.profile = j.at("profile").get<std::string>();
            r.metric = j.at("metric").get<std::string>();
            r.n = j.at("n").get<std::int64_t>();
            r.mean = j.at("mean").get<double>();
            r.sd = j.at("sd").get<double>();
            if (const auto& ci = j.at("ci"); !ci.is_null()) {
                r.ci = ConfidenceInterval{ci.at("low").get<double>(), ci.at("high").get<double>(), ci.at("level").get<double>()};
            }
            t.rows.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            throw Error("malformed-table", "line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw Error("malformed-table", "line " + std::to_string(line_no) + ": " + e.detail());
        }
    }
    return t;
}

void export_table(const SummaryTable& t, TableFormat format, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("io-failure", "cannot open '" + path.string() + "' for writing");
    f << (format == TableFormat::Csv ? to_csv(t) : to_jsonl(t));
    if (!f) throw Error("io-failure", "write failed for '" + path.string() + "'");
}

SummaryTable import_table(const std::filesystem::path& path, TableFormat format) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("io-failure", "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return format == TableFormat::Csv ? table_from_csv(ss.str()) : table_from_jsonl(ss.str());
}

} // namespace gf
