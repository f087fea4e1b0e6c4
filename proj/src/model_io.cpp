#include "photonstats/model_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "photonstats/errors.hpp"
#include "photonstats/matrix.hpp"

#include "json.hpp"

namespace photonstats {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt_double(double v, int digits = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

struct Violations {
    std::vector<std::string> items;
    void add(const std::string& path, const std::string& what) {
        items.push_back(path + ": " + what);
    }
    void raise_if_any() const {
        if (items.empty()) return;
        std::string msg = "model document invalid:";
        for (const auto& s : items) msg += "\n  " + s;
        throw ValidationError(msg);
    }
};

// Accepts [re, im] or a bare real number.
bool read_complex(const Json& j, const std::string& path, Violations& v, ZScalar& out) {
    if (j.is_number()) {
        out = ZScalar(j.get<double>(), 0.0);
        return true;
    }
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        v.add(path, "expected [re, im] or a real number");
        return false;
    }
    out = ZScalar(j[0].get<double>(), j[1].get<double>());
    return true;
}

int read_positive_int(const Json& doc, const std::string& key, Violations& v) {
    if (!doc.contains(key)) {
        v.add(key, "missing");
        return 0;
    }
    const Json& j = doc[key];
    if (!j.is_number_integer() || j.get<long long>() < 1) {
        v.add(key, "expected a positive integer");
        return 0;
    }
    return static_cast<int>(j.get<long long>());
}

CountModel parse_count_model(const Json& j, Violations& v) {
    CountModel c;
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        v.add("count_model", "expected an object with a string \"kind\"");
        return c;
    }
    std::string kind = j["kind"].get<std::string>();
    if (kind == "deterministic") {
        if (!j.contains("p") || !j["p"].is_number_integer() || j["p"].get<long long>() < 0)
            v.add("count_model.p", "expected a nonnegative integer");
        else
            c = count_deterministic(static_cast<int>(j["p"].get<long long>()));
    } else if (kind == "poisson") {
        if (!j.contains("mu") || !j["mu"].is_number() || j["mu"].get<double>() < 0)
            v.add("count_model.mu", "expected a nonnegative number");
        else
            c = count_poisson(j["mu"].get<double>());
    } else if (kind == "custom") {
        if (!j.contains("moments") || !j["moments"].is_array() || j["moments"].empty()) {
            v.add("count_model.moments", "expected a nonempty array of numbers");
        } else {
            std::vector<double> ms;
            bool ok = true;
            for (std::size_t i = 0; i < j["moments"].size(); ++i) {
                if (!j["moments"][i].is_number()) {
                    v.add("count_model.moments[" + std::to_string(i) + "]", "expected a number");
                    ok = false;
                    break;
                }
                ms.push_back(j["moments"][i].get<double>());
            }
            if (ok) c = count_custom(ms);
        }
    } else {
        v.add("count_model.kind",
              "unknown kind \"" + kind + "\" (deterministic, poisson, custom)");
    }
    return c;
}

}  // namespace

ParsedModel parse_model_json(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ValidationError(std::string("model document is not valid JSON: ") + e.what());
    }
    Violations v;
    if (!doc.is_object()) {
        v.add("$", "expected a JSON object");
        v.raise_if_any();
    }

    int d = read_positive_int(doc, "d", v);
    int p = read_positive_int(doc, "p", v);

    ZMatrix sigma;
    if (!doc.contains("sigma")) {
        v.add("sigma", "missing");
    } else if (d > 0) {
        const Json& js = doc["sigma"];
        if (!js.is_array() || static_cast<int>(js.size()) != d) {
            v.add("sigma", "expected " + std::to_string(d) + " rows");
        } else {
            sigma = ZMatrix::Zero(d, d);
            for (int i = 0; i < d; ++i) {
                const Json& row = js[static_cast<std::size_t>(i)];
                if (!row.is_array() || static_cast<int>(row.size()) != d) {
                    v.add("sigma[" + std::to_string(i) + "]",
                          "expected " + std::to_string(d) + " entries");
                    continue;
                }
                for (int j = 0; j < d; ++j) {
                    ZScalar z;
                    std::string path =
                        "sigma[" + std::to_string(i) + "][" + std::to_string(j) + "]";
                    if (read_complex(row[static_cast<std::size_t>(j)], path, v, z)) sigma(i, j) = z;
                }
            }
            if (v.items.empty()) {
                for (int i = 0; i < d; ++i) {
                    if (std::abs(sigma(i, i).imag()) > kHermitianTol)
                        v.add("sigma[" + std::to_string(i) + "][" + std::to_string(i) + "]",
                              "diagonal entry must be real");
                    for (int j = i + 1; j < d; ++j)
                        if (std::abs(sigma(i, j) - std::conj(sigma(j, i))) > kHermitianTol)
                            v.add("sigma[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                                  "not the conjugate of sigma[" + std::to_string(j) + "][" +
                                      std::to_string(i) + "]");
                }
            }
        }
    }

    std::vector<ZVector> means;
    if (doc.contains("means") && !doc["means"].is_null()) {
        const Json& jm = doc["means"];
        if (!jm.is_array() || (p > 0 && static_cast<int>(jm.size()) != p)) {
            v.add("means", "expected " + std::to_string(p) + " rows (one per wave)");
        } else if (d > 0) {
            for (int i = 0; i < static_cast<int>(jm.size()); ++i) {
                const Json& row = jm[static_cast<std::size_t>(i)];
                if (!row.is_array() || static_cast<int>(row.size()) != d) {
                    v.add("means[" + std::to_string(i) + "]",
                          "expected " + std::to_string(d) + " entries");
                    continue;
                }
                ZVector m(d);
                for (int j = 0; j < d; ++j) {
                    ZScalar z;
                    std::string path =
                        "means[" + std::to_string(i) + "][" + std::to_string(j) + "]";
                    if (read_complex(row[static_cast<std::size_t>(j)], path, v, z)) m[j] = z;
                }
                means.push_back(std::move(m));
            }
        }
    }

    ParsedModel out;
    if (doc.contains("count_model") && !doc["count_model"].is_null())
        out.count = parse_count_model(doc["count_model"], v);

    v.raise_if_any();
    try {
        out.model = make_wishart_model(sigma, p, means);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("model document invalid:\n  ") + e.what());
    }
    return out;
}

ParsedModel parse_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model_json(ss.str());
}

std::string serialize_model(const WishartModel& model, const std::optional<CountModel>& count) {
    Json doc;
    doc["d"] = model.d;
    doc["p"] = model.p;
    Json sigma = Json::array();
    for (int i = 0; i < model.d; ++i) {
        Json row = Json::array();
        for (int j = 0; j < model.d; ++j)
            row.push_back(Json::array({model.sigma(i, j).real(), model.sigma(i, j).imag()}));
        sigma.push_back(std::move(row));
    }
    doc["sigma"] = std::move(sigma);
    if (!model.means.empty()) {
        Json means = Json::array();
        for (const auto& m : model.means) {
            Json row = Json::array();
            for (int j = 0; j < model.d; ++j)
                row.push_back(Json::array({m[j].real(), m[j].imag()}));
            means.push_back(std::move(row));
        }
        doc["means"] = std::move(means);
    }
    if (count) {
        Json c;
        switch (count->kind) {
            case CountModel::Kind::deterministic:
                c["kind"] = "deterministic";
                c["p"] = count->p;
                break;
            case CountModel::Kind::poisson:
                c["kind"] = "poisson";
                c["mu"] = to_double(count->mu);
                break;
            case CountModel::Kind::custom: {
                c["kind"] = "custom";
                Json ms = Json::array();
                for (const auto& m : count->custom_moments) ms.push_back(to_double(m));
                c["moments"] = std::move(ms);
                break;
            }
        }
        doc["count_model"] = std::move(c);
    }
    return doc.dump();
}

std::string model_digest(const WishartModel& model) {
    std::string canon = serialize_model(model);
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a 64
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool comma = line.find(',') != std::string::npos;
    for (char c : line) {
        bool sep = comma ? (c == ',') : (c == ' ' || c == '\t');
        if (sep) {
            if (comma || !cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (comma || !cur.empty()) out.push_back(cur);
    if (comma)
        for (auto& f : out) {
            while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.erase(f.begin());
            while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.pop_back();
        }
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

}  // namespace

std::vector<double> read_sample_column(std::istream& in, int column) {
    if (column < 1) throw ValidationError("sample input: column index must be >= 1");
    std::vector<double> out;
    std::string line;
    int lineno = 0;
    bool first_data = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string stripped = line;
        while (!stripped.empty() && (stripped.front() == ' ' || stripped.front() == '\t'))
            stripped.erase(stripped.begin());
        if (stripped.empty() || stripped[0] == '#') continue;
        auto fields = split_fields(stripped);
        if (static_cast<int>(fields.size()) < column) {
            throw ValidationError("sample input line " + std::to_string(lineno) + ": only " +
                                  std::to_string(fields.size()) + " columns, need " +
                                  std::to_string(column));
        }
        double v;
        if (!parse_double(fields[static_cast<std::size_t>(column - 1)], v)) {
            if (first_data) {  // header row
                first_data = false;
                continue;
            }
            throw ValidationError("sample input line " + std::to_string(lineno) +
                                  ": column " + std::to_string(column) + " is not a number");
        }
        first_data = false;
        out.push_back(v);
    }
    if (out.empty()) throw ValidationError("sample input: no data rows");
    return out;
}

std::vector<double> read_sample_file(const std::string& path, int column) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open sample file: " + path);
    return read_sample_column(in, column);
}

void write_batch_csv(const SampleBatch& batch, std::ostream& out) {
    bool has_i = !batch.intensities.empty(), has_c = !batch.counts.empty();
    if (!has_i && !has_c) throw ValidationError("batch export: batch holds no rows");
    out << "# kind=" << (has_c ? "counts" : "intensities") << "\n";
    out << "# seed=" << batch.seed << "\n";
    out << "# stream=" << batch.stream_index << "\n";
    out << "# model=" << batch.model_digest << "\n";
    out << "# d=" << batch.d << "\n";
    out << "# n=" << batch.n << "\n";
    for (int j = 0; j < batch.d; ++j) {
        if (j) out << ',';
        if (has_i) out << "intensity_" << (j + 1);
        if (has_i && has_c) out << ',';
        if (has_c) out << "count_" << (j + 1);
    }
    out << "\n";
    for (int i = 0; i < batch.n; ++i) {
        for (int j = 0; j < batch.d; ++j) {
            if (j) out << ',';
            if (has_i)
                out << fmt_double(batch.intensities[static_cast<std::size_t>(i)]
                                                   [static_cast<std::size_t>(j)]);
            if (has_i && has_c) out << ',';
            if (has_c) out << batch.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        out << "\n";
    }
}

SampleBatch read_batch_csv(std::istream& in) {
    SampleBatch b;
    std::string line;
    std::vector<int> icol, ccol;  // field index per pixel, -1 when absent
    bool header_done = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(1, eq - 1), val = line.substr(eq + 1);
            while (!key.empty() && key.front() == ' ') key.erase(key.begin());
            if (key == "seed")
                b.seed = std::stoull(val);
            else if (key == "stream")
                b.stream_index = std::stoull(val);
            else if (key == "model")
                b.model_digest = val;
            else if (key == "d")
                b.d = std::stoi(val);
            continue;
        }
        auto fields = split_fields(line);
        if (!header_done) {
            header_done = true;
            icol.assign(static_cast<std::size_t>(std::max(b.d, 0)), -1);
            ccol.assign(static_cast<std::size_t>(std::max(b.d, 0)), -1);
            for (int f = 0; f < static_cast<int>(fields.size()); ++f) {
                const std::string& name = fields[static_cast<std::size_t>(f)];
                auto us = name.rfind('_');
                if (us == std::string::npos) continue;
                int pix = 0;
                try {
                    pix = std::stoi(name.substr(us + 1));
                } catch (...) {
                    continue;
                }
                if (pix < 1) continue;
                if (pix > static_cast<int>(icol.size())) {
                    icol.resize(static_cast<std::size_t>(pix), -1);
                    ccol.resize(static_cast<std::size_t>(pix), -1);
                }
                std::string base = name.substr(0, us);
                if (base == "intensity") icol[static_cast<std::size_t>(pix - 1)] = f;
                if (base == "count") ccol[static_cast<std::size_t>(pix - 1)] = f;
            }
            if (b.d == 0) b.d = static_cast<int>(icol.size());
            bool any = false;
            for (int c : icol) any = any || c >= 0;
            for (int c : ccol) any = any || c >= 0;
            if (!any) throw ValidationError("batch import: header names no pixel columns");
            continue;
        }
        bool has_i = false, has_c = false;
        for (int c : icol) has_i = has_i || c >= 0;
        for (int c : ccol) has_c = has_c || c >= 0;
        if (has_i) {
            std::vector<double> row(static_cast<std::size_t>(b.d), 0.0);
            for (int j = 0; j < b.d; ++j) {
                int f = icol[static_cast<std::size_t>(j)];
                if (f < 0 || f >= static_cast<int>(fields.size()))
                    throw ValidationError("batch import: missing intensity column");
                if (!parse_double(fields[static_cast<std::size_t>(f)], row[static_cast<std::size_t>(j)]))
                    throw ValidationError("batch import: bad intensity value");
            }
            b.intensities.push_back(std::move(row));
        }
        if (has_c) {
            std::vector<long long> row(static_cast<std::size_t>(b.d), 0);
            for (int j = 0; j < b.d; ++j) {
                int f = ccol[static_cast<std::size_t>(j)];
                if (f < 0 || f >= static_cast<int>(fields.size()))
                    throw ValidationError("batch import: missing count column");
                row[static_cast<std::size_t>(j)] =
                    std::stoll(fields[static_cast<std::size_t>(f)]);
            }
            b.counts.push_back(std::move(row));
        }
    }
    b.n = static_cast<int>(std::max(b.intensities.size(), b.counts.size()));
    if (b.n == 0) throw ValidationError("batch import: no data rows");
    return b;
}

}  // namespace photonstats
