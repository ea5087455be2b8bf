// SPDX-License-Identifier: Apache-2.0

#include "mimofb/io.hpp"

#include "mimofb/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace mimofb {

// ---------------------------------------------------------------------
// Spec-string parsing
// ---------------------------------------------------------------------

namespace {

double parse_double(const std::string &text, const std::string &what) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception &) {
        throw std::invalid_argument(what + ": '" + text + "' is not a number");
    }
    if (used != text.size())
        throw std::invalid_argument(what + ": '" + text + "' is not a number");
    return value;
}

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, sep))
        out.push_back(item);
    if (!text.empty() && text.back() == sep)
        out.push_back("");
    return out;
}

} // namespace

std::vector<double> parse_snr_spec(const std::string &spec) {
    if (spec.empty())
        throw std::invalid_argument("SNR spec: empty");
    if (spec.find(':') != std::string::npos) {
        const std::vector<std::string> parts = split(spec, ':');
        if (parts.size() != 3)
            throw std::invalid_argument("SNR spec: range form is lo:hi:step");
        const double lo = parse_double(parts[0], "SNR spec");
        const double hi = parse_double(parts[1], "SNR spec");
        const double step = parse_double(parts[2], "SNR spec");
        if (!(step > 0.0))
            throw std::invalid_argument("SNR spec: step must be positive");
        if (hi < lo)
            throw std::invalid_argument("SNR spec: hi must be >= lo");
        std::vector<double> grid;
        // Inclusive upper edge when it is reachable (within rounding).
        for (int i = 0;; i++) {
            const double v = lo + step * i;
            if (v > hi + 1e-9 * step)
                break;
            grid.push_back(v);
        }
        return grid;
    }
    std::vector<double> grid;
    for (const std::string &item : split(spec, ','))
        grid.push_back(parse_double(item, "SNR spec"));
    return grid;
}

EigenvalueProfile parse_profile(const std::string &spec) {
    if (spec == "equal")
        return EigenvalueProfile::equal();
    if (spec.rfind("exp:", 0) == 0)
        return EigenvalueProfile::exponential(
            parse_double(spec.substr(4), "profile decay"));
    if (spec.rfind("explicit:", 0) == 0) {
        std::vector<double> values;
        for (const std::string &item : split(spec.substr(9), ','))
            values.push_back(parse_double(item, "profile weight"));
        return EigenvalueProfile::explicit_list(std::move(values));
    }
    throw std::invalid_argument("profile: expected equal, exp:RHO or explicit:w1,w2,...");
}

BitRule parse_bit_rule(const std::string &spec) {
    if (spec == "scaled")
        return BitRule::scaled();
    if (spec.rfind("scaled:", 0) == 0)
        return BitRule::scaled(parse_double(spec.substr(7), "bit rule offset"));
    if (spec.rfind("fixed:", 0) == 0) {
        const double bits = parse_double(spec.substr(6), "bit rule bits");
        if (bits < 0.0 || bits > 30.0)
            throw std::invalid_argument("bit rule: fixed bits must lie in [0, 30]");
        return BitRule::fixed(bits);
    }
    throw std::invalid_argument("bit rule: expected scaled, scaled:OFFSET or fixed:B");
}

namespace {

std::vector<Scheme> parse_schemes(const std::string &spec) {
    std::vector<Scheme> schemes;
    for (const std::string &item : split(spec, ',')) {
        const Scheme s = scheme_from_label(item);
        if (std::find(schemes.begin(), schemes.end(), s) == schemes.end())
            schemes.push_back(s);
    }
    if (schemes.empty())
        throw std::invalid_argument("schemes: empty list");
    return schemes;
}

std::vector<arma::uword> parse_ranks(const std::string &spec) {
    std::vector<arma::uword> ranks;
    for (const std::string &item : split(spec, ',')) {
        const double v = parse_double(item, "ranks");
        if (v < 1.0 || v != std::floor(v))
            throw std::invalid_argument("ranks: entries must be positive integers");
        ranks.push_back(static_cast<arma::uword>(v));
    }
    if (ranks.empty())
        throw std::invalid_argument("ranks: empty list");
    return ranks;
}

std::vector<std::pair<arma::uword, arma::uword>> parse_lattice(const std::string &spec) {
    std::vector<std::pair<arma::uword, arma::uword>> lattice;
    for (const std::string &item : split(spec, ',')) {
        const std::vector<std::string> rb = split(item, ':');
        if (rb.size() != 2)
            throw std::invalid_argument("lattice: expected RANK:BITS pairs");
        const double r = parse_double(rb[0], "lattice rank");
        const double b = parse_double(rb[1], "lattice bits");
        if (r < 2.0 || r != std::floor(r) || b < 0.0 || b != std::floor(b) || b > 20.0)
            throw std::invalid_argument("lattice: rank >= 2 and bits in [0, 20] required");
        lattice.emplace_back(static_cast<arma::uword>(r), static_cast<arma::uword>(b));
    }
    return lattice;
}

} // namespace

// ---------------------------------------------------------------------
// Config hashing
// ---------------------------------------------------------------------

namespace {

std::string full_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string bit_rule_label(const BitRule &rule) {
    switch (rule.kind) {
    case BitRule::Kind::scaled:
        return "scaled:" + full_double(rule.offset);
    case BitRule::Kind::fixed:
        return "fixed:" + full_double(rule.fixed_bits);
    }
    return "?";
}

// Canonical, order-stable description of everything that can change the
// numbers.  Worker count is intentionally absent.
std::string canonical_config(const ExperimentConfig &cfg) {
    std::ostringstream os;
    os << "antennas=" << cfg.num_antennas << "|users=" << cfg.num_users
       << "|rank=" << cfg.rank << "|profile=" << cfg.profile.label() << "|snr=";
    for (std::size_t i = 0; i < cfg.snr_grid_db.size(); i++)
        os << (i ? "," : "") << full_double(cfg.snr_grid_db[i]);
    os << "|schemes=";
    for (std::size_t i = 0; i < cfg.schemes.size(); i++)
        os << (i ? "," : "") << scheme_label(cfg.schemes[i]);
    os << "|rule=" << bit_rule_label(cfg.bit_rule) << "|trials=" << cfg.trials
       << "|seed=" << cfg.seed << "|shared=" << (cfg.shared_correlation ? 1 : 0)
       << "|check=" << (cfg.check_identity ? 1 : 0);
    return os.str();
}

} // namespace

std::uint64_t config_hash(const ExperimentConfig &cfg) {
    const std::string text = canonical_config(cfg);
    std::uint64_t h = 14695981039346656037ull; // FNV-1a offset basis
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull; // FNV prime
    }
    return h;
}

std::string config_hash_hex(const ExperimentConfig &cfg) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    return buf;
}

// ---------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------

namespace {

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

std::string render_sweep_csv(const SweepResult &result) {
    const bool by_rank = result.kind == "required-bits";
    std::vector<PointRecord> rows = result.records;

    if (by_rank) {
        // The search summaries ride along as pseudo-rows so a single file
        // plots measured bits against the closed-form requirement.
        for (const RequiredBitsRecord &rb : result.required_bits) {
            PointRecord rec;
            rec.snr_db = result.config.snr_grid_db.front();
            rec.rank = rb.rank;
            rec.scheme = "formula";
            rec.bits = rb.formula_bits;
            rec.bits_unrounded = rb.formula_bits;
            rec.mean_rate = std::numeric_limits<double>::quiet_NaN();
            rec.rate_stderr = std::numeric_limits<double>::quiet_NaN();
            rec.mean_quant_error = std::numeric_limits<double>::quiet_NaN();
            rec.gap_vs_ideal = std::numeric_limits<double>::quiet_NaN();
            rec.gap_bound = std::numeric_limits<double>::quiet_NaN();
            rows.push_back(std::move(rec));
        }
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [by_rank](const PointRecord &a, const PointRecord &b) {
                         if (by_rank) {
                             if (a.rank != b.rank)
                                 return a.rank < b.rank;
                         } else if (a.snr_db != b.snr_db) {
                             return a.snr_db < b.snr_db;
                         }
                         return a.scheme < b.scheme;
                     });

    std::ostringstream os;
    os << "# config-hash=" << config_hash_hex(result.config) << ", seed=" << result.config.seed
       << "\n";
    if (by_rank)
        os << "snr_db,rank,scheme,bits,mean_rate,rate_stderr,mean_quant_error,gap_vs_ideal,"
              "gap_bound,discarded\n";
    else
        os << "snr_db,scheme,bits,mean_rate,rate_stderr,mean_quant_error,gap_vs_ideal,"
              "gap_bound,discarded\n";
    for (const PointRecord &r : rows) {
        os << fmt6(r.snr_db) << ",";
        if (by_rank)
            os << r.rank << ",";
        os << r.scheme << "," << fmt6(r.bits) << "," << fmt6(r.mean_rate) << ","
           << fmt6(r.rate_stderr) << "," << fmt6(r.mean_quant_error) << ","
           << fmt6(r.gap_vs_ideal) << "," << fmt6(r.gap_bound) << "," << r.discarded << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------

namespace {

nlohmann::json config_to_json(const ExperimentConfig &cfg) {
    nlohmann::json j;
    j["antennas"] = cfg.num_antennas;
    j["users"] = cfg.num_users;
    j["rank"] = cfg.rank;
    j["profile"] = cfg.profile.label();
    j["snr_grid_db"] = cfg.snr_grid_db;
    nlohmann::json schemes = nlohmann::json::array();
    for (const Scheme s : cfg.schemes)
        schemes.push_back(scheme_label(s));
    j["schemes"] = schemes;
    j["bit_rule"] = bit_rule_label(cfg.bit_rule);
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["shared_correlation"] = cfg.shared_correlation;
    j["check_identity"] = cfg.check_identity;
    return j;
}

nlohmann::json record_to_json(const PointRecord &r) {
    nlohmann::json j;
    j["snr_db"] = r.snr_db;
    j["rank"] = r.rank;
    j["scheme"] = r.scheme;
    j["bits"] = r.bits;
    j["bits_unrounded"] = r.bits_unrounded;
    j["mean_rate"] = r.mean_rate;
    j["rate_stderr"] = r.rate_stderr;
    j["mean_quant_error"] = r.mean_quant_error;
    j["gap_vs_ideal"] = r.gap_vs_ideal;
    j["gap_bound"] = r.gap_bound;
    j["discarded"] = r.discarded;
    j["valid_trials"] = r.valid_trials;
    return j;
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    os << text;
    if (!os)
        throw std::runtime_error("short write to '" + path + "'");
}

} // namespace

void write_sweep(const SweepResult &result, const std::string &path,
                 const std::string &format) {
    if (format == "csv") {
        write_text(path, render_sweep_csv(result));
        return;
    }
    if (format != "json")
        throw std::invalid_argument("write_sweep: format must be csv or json");
    nlohmann::json j;
    j["kind"] = result.kind;
    j["config_hash"] = config_hash_hex(result.config);
    j["seed"] = result.config.seed;
    j["config"] = config_to_json(result.config);
    nlohmann::json records = nlohmann::json::array();
    for (const PointRecord &r : result.records)
        records.push_back(record_to_json(r));
    j["records"] = records;
    nlohmann::json rb = nlohmann::json::array();
    for (const RequiredBitsRecord &r : result.required_bits) {
        nlohmann::json e;
        e["rank"] = r.rank;
        e["reachable"] = r.reachable;
        e["bits"] = r.bits;
        e["measured_gap"] = r.measured_gap;
        e["formula_bits"] = r.formula_bits;
        rb.push_back(e);
    }
    j["required_bits"] = rb;
    j["max_witness_error"] = result.max_witness_error;
    write_text(path, j.dump(2) + "\n");
}

void write_bound_reports(const std::vector<BoundReport> &reports, std::uint64_t seed,
                         const std::string &path) {
    nlohmann::json j;
    j["seed"] = seed;
    nlohmann::json arr = nlohmann::json::array();
    for (const BoundReport &r : reports) {
        // One object per check: name, the inputs that parameterized it, the
        // bound/empirical pair, the slack granted, and the verdict.
        nlohmann::json e;
        e["name"] = r.family;
        e["inputs"] = {{"rank", r.rank},
                       {"bits", r.bits},
                       {"profile", r.profile},
                       {"samples", r.samples}};
        e["bound"] = r.reference;
        e["empirical"] = r.empirical;
        e["slack"] = r.margin;
        e["satisfied"] = r.pass;
        arr.push_back(e);
    }
    j["reports"] = arr;
    write_text(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------

namespace {

// Raw option holders; conversion to ExperimentConfig happens after parsing
// so config-file values and flags go through identical validation.
struct RawOptions {
    std::uint64_t antennas = 64;
    std::uint64_t users = 10;
    std::uint64_t rank = 4;
    std::uint64_t trials = 500;
    std::uint64_t seed = 42;
    std::string profile = "equal";
    std::string snr = "0:18:3";
    std::string schemes = "ideal,statistics,rvq,eigen";
    std::string rule = "scaled:3.17";
    bool shared = false;
    bool check_identity = false;
    int workers = 0;
    std::string out;
    std::string format = "csv";
    std::string config_path;
};

int env_workers() {
    const char *env = std::getenv("MIMO_FB_THREADS");
    if (env == nullptr || *env == '\0')
        return 0;
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == nullptr || *end != '\0' || v < 0 || v > 1024)
        throw std::invalid_argument("MIMO_FB_THREADS must be an integer in [0, 1024]");
    return static_cast<int>(v);
}

// ---- flat key=value config files --------------------------------------
//
// Keys are the long flag names without the leading dashes; '#' starts a
// comment; explicit command-line flags override file values.  (CLI11's own
// config reader wants INI sections per subcommand, which would break the
// flat format, so the few lines of parsing are done here.)

struct ConfigBinding {
    std::string key;
    std::function<void(const std::string &)> apply;
};

std::string trim(const std::string &text) {
    const std::size_t first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return "";
    const std::size_t last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

std::uint64_t parse_u64(const std::string &text, const std::string &what) {
    const double v = parse_double(text, what);
    if (v < 0.0 || v != std::floor(v) || v > 9e18)
        throw std::invalid_argument(what + ": '" + text + "' is not a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

bool parse_bool(const std::string &text, const std::string &what) {
    if (text == "true" || text == "1" || text == "yes" || text == "on")
        return true;
    if (text == "false" || text == "0" || text == "no" || text == "off")
        return false;
    throw std::invalid_argument(what + ": '" + text + "' is not a boolean");
}

void apply_config_file(const CLI::App *sub, const std::string &path,
                       const std::vector<ConfigBinding> &bindings) {
    if (path.empty())
        return;
    std::ifstream is(path);
    if (!is)
        throw std::invalid_argument("config file '" + path + "' cannot be opened");
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        lineno++;
        const std::string body = trim(line);
        if (body.empty() || body[0] == '#')
            continue;
        const std::size_t eq = body.find('=');
        const std::string where = path + ":" + std::to_string(lineno);
        if (eq == std::string::npos)
            throw std::invalid_argument(where + ": expected key=value");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        const auto binding =
            std::find_if(bindings.begin(), bindings.end(),
                         [&key](const ConfigBinding &b) { return b.key == key; });
        if (binding == bindings.end())
            throw std::invalid_argument(where + ": unknown key '" + key +
                                        "' for this subcommand");
        if (sub->count("--" + key) > 0)
            continue; // explicit flag wins
        binding->apply(value);
    }
}

std::vector<ConfigBinding> common_bindings(RawOptions &raw) {
    return {
        {"antennas", [&raw](const std::string &v) { raw.antennas = parse_u64(v, "antennas"); }},
        {"users", [&raw](const std::string &v) { raw.users = parse_u64(v, "users"); }},
        {"profile", [&raw](const std::string &v) { raw.profile = v; }},
        {"trials", [&raw](const std::string &v) { raw.trials = parse_u64(v, "trials"); }},
        {"seed", [&raw](const std::string &v) { raw.seed = parse_u64(v, "seed"); }},
        {"shared-correlation",
         [&raw](const std::string &v) { raw.shared = parse_bool(v, "shared-correlation"); }},
        {"check-identity",
         [&raw](const std::string &v) { raw.check_identity = parse_bool(v, "check-identity"); }},
        {"workers",
         [&raw](const std::string &v) {
             raw.workers = static_cast<int>(parse_u64(v, "workers"));
         }},
        {"out", [&raw](const std::string &v) { raw.out = v; }},
        {"format", [&raw](const std::string &v) { raw.format = v; }},
    };
}

void add_common_options(CLI::App *sub, RawOptions &raw) {
    sub->add_option("--antennas", raw.antennas, "transmit antennas M")
        ->capture_default_str();
    sub->add_option("--users", raw.users, "single-antenna users K")->capture_default_str();
    sub->add_option("--profile", raw.profile,
                    "eigenvalue profile: equal, exp:RHO or explicit:w1,w2,...")
        ->capture_default_str();
    sub->add_option("--trials", raw.trials, "Monte Carlo trials per operating point")
        ->capture_default_str();
    sub->add_option("--seed", raw.seed, "master seed")->capture_default_str();
    sub->add_flag("--shared-correlation", raw.shared,
                  "all users share one correlation model per trial");
    sub->add_flag("--check-identity", raw.check_identity,
                  "evaluate the interference factorization witness per sample");
    sub->add_option("--workers", raw.workers,
                    "worker cap for the trial loop (0 = OpenMP default; "
                    "MIMO_FB_THREADS sets the same cap)")
        ->capture_default_str();
    sub->add_option("--out", raw.out, "output file (omit for a stdout table only)");
    sub->add_option("--format", raw.format, "output format: csv or json")
        ->capture_default_str();
    sub->add_option("--config", raw.config_path,
                    "flat key=value file (keys = flag names); flags override it");
}

ExperimentConfig build_config(const RawOptions &raw) {
    ExperimentConfig cfg;
    if (raw.antennas < 1 || raw.antennas > 4096)
        throw std::invalid_argument("--antennas must lie in [1, 4096]");
    if (raw.users < 1)
        throw std::invalid_argument("--users must be >= 1");
    if (raw.rank < 1)
        throw std::invalid_argument("--rank must be >= 1");
    if (raw.trials < 1)
        throw std::invalid_argument("--trials must be >= 1");
    cfg.num_antennas = raw.antennas;
    cfg.num_users = raw.users;
    cfg.rank = raw.rank;
    cfg.trials = raw.trials;
    cfg.seed = raw.seed;
    cfg.profile = parse_profile(raw.profile);
    cfg.snr_grid_db = parse_snr_spec(raw.snr);
    cfg.schemes = parse_schemes(raw.schemes);
    cfg.bit_rule = parse_bit_rule(raw.rule);
    cfg.shared_correlation = raw.shared;
    cfg.check_identity = raw.check_identity;
    cfg.workers = raw.workers;
    if (raw.format != "csv" && raw.format != "json")
        throw std::invalid_argument("--format must be csv or json");
    return cfg;
}

} // namespace

CliParseOutcome parse_cli(int argc, const char *const argv[]) {
    CLI::App app{"Monte Carlo simulator and bounds library for limited-feedback "
                 "multiuser MIMO downlink"};
    app.require_subcommand(1);

    const int default_workers = env_workers();

    RawOptions rc_raw;
    rc_raw.workers = default_workers;
    CLI::App *rc = app.add_subcommand(
        "rate-curve", "mean per-user rate versus SNR for the configured schemes");
    rc->add_option("--rank", rc_raw.rank, "correlation rank r")->capture_default_str();
    rc->add_option("--snr", rc_raw.snr, "SNR grid in dB: lo:hi:step, list or value")
        ->capture_default_str();
    rc->add_option("--schemes", rc_raw.schemes, "comma list: ideal,statistics,rvq,eigen")
        ->capture_default_str();
    rc->add_option("--bits-rule", rc_raw.rule, "feedback budget: scaled[:OFFSET] or fixed:B")
        ->capture_default_str();
    add_common_options(rc, rc_raw);

    RawOptions rb_raw;
    rb_raw.workers = default_workers;
    rb_raw.snr = "6";
    std::string ranks_spec = "2,3,4";
    double gap_target = 1.0;
    std::uint64_t search_cap = 26;
    CLI::App *rb = app.add_subcommand(
        "required-bits", "minimum feedback bits meeting a rate-gap target, per rank");
    rb->add_option("--snr", rb_raw.snr, "operating SNR in dB (single value)")
        ->capture_default_str();
    rb->add_option("--ranks", ranks_spec, "comma list of correlation ranks")
        ->capture_default_str();
    rb->add_option("--gap-target", gap_target, "rate-gap target in bits/s/Hz")
        ->capture_default_str();
    rb->add_option("--search-cap", search_cap, "largest B tried before giving up")
        ->capture_default_str();
    add_common_options(rb, rb_raw);

    std::uint64_t bs_seed = 42;
    std::string bs_out;
    std::string lattice_spec;
    CLI::App *bs = app.add_subcommand("bound-suite",
                                      "empirical verification of every bound family");
    bs->add_option("--seed", bs_seed, "master seed")->capture_default_str();
    bs->add_option("--lattice", lattice_spec,
                   "RANK:BITS pairs, comma separated (default: built-in lattice)");
    bs->add_option("--out", bs_out, "output JSON file");

    RawOptions qd_raw;
    qd_raw.antennas = 16;
    qd_raw.rank = 3;
    qd_raw.seed = 7;
    std::uint64_t demo_bits = 6;
    std::string demo_kind = "statistics";
    std::string demo_save;
    CLI::App *qd = app.add_subcommand(
        "quantize-demo", "build a materialized codebook, quantize one draw, print a report");
    qd->add_option("--antennas", qd_raw.antennas, "transmit antennas M")
        ->capture_default_str();
    qd->add_option("--rank", qd_raw.rank, "correlation rank r")->capture_default_str();
    qd->add_option("--bits", demo_bits, "codebook bits B")->capture_default_str();
    qd->add_option("--kind", demo_kind, "codebook kind: statistics, rvq or eigen")
        ->capture_default_str();
    qd->add_option("--profile", qd_raw.profile, "eigenvalue profile")->capture_default_str();
    qd->add_option("--seed", qd_raw.seed, "master seed")->capture_default_str();
    qd->add_option("--save-codebook", demo_save, "write the book to this .cbk file");

    CliParseOutcome outcome;
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        outcome.help_requested = true;
        outcome.help_text = app.help();
        return outcome;
    } catch (const CLI::ParseError &e) {
        throw std::invalid_argument(std::string(e.what()) +
                                    "\nRun with --help for usage.");
    }

    CliInvocation &inv = outcome.invocation;
    if (rc->parsed()) {
        std::vector<ConfigBinding> bindings = common_bindings(rc_raw);
        bindings.push_back(
            {"rank", [&](const std::string &v) { rc_raw.rank = parse_u64(v, "rank"); }});
        bindings.push_back({"snr", [&](const std::string &v) { rc_raw.snr = v; }});
        bindings.push_back({"schemes", [&](const std::string &v) { rc_raw.schemes = v; }});
        bindings.push_back({"bits-rule", [&](const std::string &v) { rc_raw.rule = v; }});
        apply_config_file(rc, rc_raw.config_path, bindings);
        inv.subcommand = "rate-curve";
        inv.config = build_config(rc_raw);
        inv.output_path = rc_raw.out;
        inv.format = rc_raw.format;
    } else if (rb->parsed()) {
        std::vector<ConfigBinding> bindings = common_bindings(rb_raw);
        bindings.push_back({"snr", [&](const std::string &v) { rb_raw.snr = v; }});
        bindings.push_back({"ranks", [&](const std::string &v) { ranks_spec = v; }});
        bindings.push_back({"gap-target", [&](const std::string &v) {
                                gap_target = parse_double(v, "gap-target");
                            }});
        bindings.push_back({"search-cap", [&](const std::string &v) {
                                search_cap = parse_u64(v, "search-cap");
                            }});
        apply_config_file(rb, rb_raw.config_path, bindings);
        inv.subcommand = "required-bits";
        inv.config = build_config(rb_raw);
        inv.output_path = rb_raw.out;
        inv.format = rb_raw.format;
        inv.ranks = parse_ranks(ranks_spec);
        inv.gap_target_bps = gap_target;
        if (search_cap > 30)
            throw std::invalid_argument("--search-cap must be <= 30");
        inv.search_cap = search_cap;
    } else if (bs->parsed()) {
        inv.subcommand = "bound-suite";
        inv.config.seed = bs_seed;
        inv.output_path = bs_out;
        inv.format = "json";
        if (!lattice_spec.empty())
            inv.lattice = parse_lattice(lattice_spec);
    } else if (qd->parsed()) {
        inv.subcommand = "quantize-demo";
        inv.config = build_config(qd_raw);
        if (demo_kind != "statistics" && demo_kind != "rvq" && demo_kind != "eigen")
            throw std::invalid_argument("--kind must be statistics, rvq or eigen");
        if (demo_bits > 20)
            throw std::invalid_argument("--bits must be <= 20 for materialized books");
        inv.demo_bits = demo_bits;
        inv.demo_kind = demo_kind;
        inv.demo_save_path = demo_save;
    }
    return outcome;
}

} // namespace mimofb
