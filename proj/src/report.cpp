#include "qlv/report.hpp"

#include <charconv>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qlv {

namespace {

using nlohmann::json;

// Doubles as shortest round-trip decimal strings.
std::string dstr(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

double dparse(const std::string& s) {
    try {
        return std::stod(s);
    } catch (...) {
        throw IOError("bad decimal double: '" + s + "'");
    }
}

json cplx_json(const PrecComplex& z) {
    return json{{"re", z.re_decimal()}, {"im", z.im_decimal()}};
}

PrecComplex cplx_parse(const json& j, mpfr_prec_t prec) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im")) {
        throw IOError("bad complex scalar in report/point JSON");
    }
    return PrecComplex::from_decimal(j["re"].get<std::string>(),
                                     j["im"].get<std::string>(), prec);
}

json point_json(const ParameterPoint& pt) {
    json j;
    j["n"] = pt.n;
    j["q"] = cplx_json(pt.q);
    json sc = json::object();
    for (const auto& [k, v] : pt.scalars) sc[k] = cplx_json(v);
    j["scalars"] = std::move(sc);
    json vec = json::object();
    for (const auto& [k, vs] : pt.vectors) {
        json arr = json::array();
        for (const auto& v : vs) arr.push_back(cplx_json(v));
        vec[k] = std::move(arr);
    }
    j["vectors"] = std::move(vec);
    json ints = json::object();
    for (const auto& [k, v] : pt.integers) ints[k] = v;
    j["integers"] = std::move(ints);
    json ivs = json::object();
    for (const auto& [k, vs] : pt.int_vectors) ivs[k] = vs;
    j["int_vectors"] = std::move(ivs);
    json ftab = json::array();
    for (const auto& v : pt.ftab) ftab.push_back(cplx_json(v));
    j["ftab"] = std::move(ftab);
    return j;
}

ParameterPoint point_parse(const json& j, mpfr_prec_t prec) {
    ParameterPoint pt;
    pt.n = j.at("n").get<int>();
    pt.q = cplx_parse(j.at("q"), prec);
    if (j.contains("scalars")) {
        for (auto it = j["scalars"].begin(); it != j["scalars"].end(); ++it) {
            pt.scalars.emplace(it.key(), cplx_parse(it.value(), prec));
        }
    }
    if (j.contains("vectors")) {
        for (auto it = j["vectors"].begin(); it != j["vectors"].end(); ++it) {
            std::vector<PrecComplex> vs;
            for (const auto& e : it.value()) vs.push_back(cplx_parse(e, prec));
            pt.vectors.emplace(it.key(), std::move(vs));
        }
    }
    if (j.contains("integers")) {
        for (auto it = j["integers"].begin(); it != j["integers"].end(); ++it) {
            pt.integers.emplace(it.key(), it.value().get<long>());
        }
    }
    if (j.contains("int_vectors")) {
        for (auto it = j["int_vectors"].begin(); it != j["int_vectors"].end(); ++it) {
            pt.int_vectors.emplace(it.key(), it.value().get<std::vector<long>>());
        }
    }
    if (j.contains("ftab")) {
        for (const auto& e : j["ftab"]) pt.ftab.push_back(cplx_parse(e, prec));
    }
    return pt;
}

json config_json(const SampleConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["samples"] = c.samples_per_identity;
    j["arities"] = c.arities;
    j["margin"] = dstr(c.margin);
    j["q_band"] = json::array({dstr(c.q_min), dstr(c.q_max)});
    j["pole_threshold"] = dstr(c.pole_threshold);
    j["schedule"] = json{{"initial_radius", c.schedule.initial_radius},
                         {"max_radius", c.schedule.max_radius},
                         {"tol", dstr(c.schedule.tol)}};
    j["precision_bits"] = c.precision_bits;
    j["probe_bits"] = c.probe_bits;
    j["complex_q"] = c.complex_q;
    return j;
}

SampleConfig config_parse(const json& j) {
    SampleConfig c;
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("samples")) c.samples_per_identity = j["samples"].get<int>();
    if (j.contains("arities")) c.arities = j["arities"].get<std::vector<int>>();
    if (j.contains("margin")) c.margin = dparse(j["margin"].get<std::string>());
    if (j.contains("q_band")) {
        c.q_min = dparse(j["q_band"][0].get<std::string>());
        c.q_max = dparse(j["q_band"][1].get<std::string>());
    }
    if (j.contains("pole_threshold")) {
        c.pole_threshold = dparse(j["pole_threshold"].get<std::string>());
    }
    if (j.contains("schedule")) {
        const auto& s = j["schedule"];
        if (s.contains("initial_radius")) c.schedule.initial_radius = s["initial_radius"].get<long>();
        if (s.contains("max_radius")) c.schedule.max_radius = s["max_radius"].get<long>();
        if (s.contains("tol")) c.schedule.tol = dparse(s["tol"].get<std::string>());
    }
    if (j.contains("precision_bits")) c.precision_bits = j["precision_bits"].get<long>();
    if (j.contains("probe_bits")) c.probe_bits = j["probe_bits"].get<long>();
    if (j.contains("complex_q")) c.complex_q = j["complex_q"].get<bool>();
    return c;
}

json record_json(const VerificationRecord& r) {
    json j;
    j["id"] = r.id;
    j["n"] = r.n;
    j["sample"] = r.sample_index;
    j["status"] = status_name(r.status);
    j["point"] = point_json(r.point);
    j["lhs"] = cplx_json(r.lhs);
    j["rhs"] = cplx_json(r.rhs);
    j["abs_err"] = dstr(r.abs_err);
    j["rel_err"] = dstr(r.rel_err);
    j["radius_used"] = r.radius_used;
    j["err_estimate"] = dstr(r.err_estimate);
    j["precision_bits"] = r.precision_bits;
    j["detail"] = r.detail;
    return j;
}

VerificationRecord record_parse(const json& j) {
    VerificationRecord r;
    r.id = j.at("id").get<std::string>();
    r.n = j.at("n").get<int>();
    r.sample_index = j.at("sample").get<int>();
    r.status = status_from_name(j.at("status").get<std::string>());
    r.precision_bits = j.at("precision_bits").get<long>();
    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(r.precision_bits);
    r.point = point_parse(j.at("point"), prec);
    r.lhs = cplx_parse(j.at("lhs"), prec);
    r.rhs = cplx_parse(j.at("rhs"), prec);
    r.abs_err = dparse(j.at("abs_err").get<std::string>());
    r.rel_err = dparse(j.at("rel_err").get<std::string>());
    r.radius_used = j.at("radius_used").get<long>();
    r.err_estimate = dparse(j.at("err_estimate").get<std::string>());
    r.detail = j.value("detail", "");
    return r;
}

std::string csv_escape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace

std::string report_to_json(const SuiteReport& report, const std::string& timestamp) {
    json j;
    j["schema"] = kReportSchema;
    j["catalog_version"] = kCatalogVersion;
    j["timestamp"] = timestamp;
    j["config"] = config_json(report.config);
    json totals = json::object();
    for (const auto& [k, v] : report.totals) totals[k] = v;
    j["totals"] = std::move(totals);
    json per = json::object();
    for (const auto& [id, agg] : report.per_identity) {
        json a;
        for (const auto& [k, v] : agg.status_counts) a["status_counts"][k] = v;
        a["worst_rel_err"] = dstr(agg.worst_rel_err);
        per[id] = std::move(a);
    }
    j["per_identity"] = std::move(per);
    json recs = json::array();
    for (const auto& r : report.records) recs.push_back(record_json(r));
    j["records"] = std::move(recs);
    json exact = json::array();
    for (const auto& r : report.exact_records) {
        exact.push_back(json{{"id", r.id},
                             {"n", r.n},
                             {"N", r.N},
                             {"sample", r.sample_index},
                             {"pass", r.pass},
                             {"detail", r.detail}});
    }
    j["exact"] = std::move(exact);
    json ladder = json::array();
    for (const auto& r : report.ladder_records) {
        ladder.push_back(json{{"name", r.name},
                              {"n", r.n},
                              {"points", r.points},
                              {"worst_rel_err", dstr(r.worst_rel_err)},
                              {"pass", r.pass},
                              {"detail", r.detail}});
    }
    j["ladder"] = std::move(ladder);
    return j.dump(1);
}

SuiteReport report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& ex) {
        throw IOError(std::string("report parse error: ") + ex.what());
    }
    if (!j.contains("schema") || j["schema"].get<std::string>() != kReportSchema) {
        throw IOError("unsupported report schema");
    }
    SuiteReport rep;
    rep.config = config_parse(j.at("config"));
    for (const auto& r : j.at("records")) rep.records.push_back(record_parse(r));
    if (j.contains("exact")) {
        for (const auto& r : j["exact"]) {
            ExactRecord er;
            er.id = r.at("id").get<std::string>();
            er.n = r.at("n").get<int>();
            er.N = r.at("N").get<long>();
            er.sample_index = r.at("sample").get<int>();
            er.pass = r.at("pass").get<bool>();
            er.detail = r.value("detail", "");
            rep.exact_records.push_back(std::move(er));
        }
    }
    if (j.contains("ladder")) {
        for (const auto& r : j["ladder"]) {
            LadderRecord lr;
            lr.name = r.at("name").get<std::string>();
            lr.n = r.at("n").get<int>();
            lr.points = r.at("points").get<int>();
            lr.worst_rel_err = dparse(r.at("worst_rel_err").get<std::string>());
            lr.pass = r.at("pass").get<bool>();
            lr.detail = r.value("detail", "");
            rep.ladder_records.push_back(std::move(lr));
        }
    }
    rep.aggregate();
    return rep;
}

std::string report_to_csv(const SuiteReport& report) {
    std::ostringstream out;
    out << "id,n,sample,status,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,"
           "radius_used,err_estimate,precision_bits,detail,point\n";
    for (const auto& r : report.records) {
        out << r.id << ',' << r.n << ',' << r.sample_index << ',' << status_name(r.status)
            << ',' << r.lhs.re_decimal() << ',' << r.lhs.im_decimal() << ','
            << r.rhs.re_decimal() << ',' << r.rhs.im_decimal() << ',' << dstr(r.abs_err)
            << ',' << dstr(r.rel_err) << ',' << r.radius_used << ','
            << dstr(r.err_estimate) << ',' << r.precision_bits << ','
            << csv_escape(r.detail) << ',' << csv_escape(point_json(r.point).dump())
            << '\n';
    }
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IOError("cannot open for writing: " + path);
    f << content;
    if (!f) throw IOError("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IOError("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string point_to_json(const ParameterPoint& pt, long precision_bits) {
    json j = point_json(pt);
    j["precision_bits"] = precision_bits;
    return j.dump(1);
}

ParameterPoint point_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& ex) {
        throw IOError(std::string("point parse error: ") + ex.what());
    }
    const long prec = j.value("precision_bits", 128L);
    return point_parse(j, static_cast<mpfr_prec_t>(prec));
}

SampleConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& ex) {
        throw UsageError(std::string("config parse error: ") + ex.what());
    }
    SampleConfig cfg = config_parse(j);
    cfg.validate();
    return cfg;
}

std::string config_to_json(const SampleConfig& cfg) { return config_json(cfg).dump(1); }

std::vector<Regression> baseline_compare(const SuiteReport& older,
                                         const SuiteReport& newer) {
    std::vector<Regression> regs;
    std::map<std::string, const VerificationRecord*> old_by_key;
    for (const auto& r : older.records) {
        old_by_key[r.id + "/" + std::to_string(r.n) + "/" + std::to_string(r.sample_index)] =
            &r;
    }
    for (const auto& r : newer.records) {
        const std::string key =
            r.id + "/" + std::to_string(r.n) + "/" + std::to_string(r.sample_index);
        auto it = old_by_key.find(key);
        if (it == old_by_key.end()) continue;
        if (it->second->status == Status::PASS && r.status != Status::PASS) {
            regs.push_back({key + ": PASS -> " + status_name(r.status)});
        }
    }
    for (const auto& [id, agg] : newer.per_identity) {
        auto it = older.per_identity.find(id);
        if (it == older.per_identity.end()) continue;
        const double old_worst = it->second.worst_rel_err;
        if (old_worst > 0.0 && agg.worst_rel_err > 10.0 * old_worst) {
            regs.push_back({id + ": worst rel_err grew " + dstr(old_worst) + " -> " +
                            dstr(agg.worst_rel_err)});
        }
    }
    return regs;
}

std::string iso_timestamp_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return std::string(buf);
}

}  // namespace qlv
