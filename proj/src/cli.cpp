#include "fiq/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "fiq/digits.hpp"
#include "fiq/estimators.hpp"
#include "fiq/experiments.hpp"
#include "fiq/models.hpp"

namespace fiq::cli {

namespace {

using nlohmann::json;

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Options {
    std::string model;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::string out_dir;
    std::size_t depth = 0;
    std::optional<std::size_t> samples;
    std::optional<std::size_t> blocks;  // default min(8, depth)
    bool mi_csv = false;
    std::string format = "csv";
    std::string constant;
    std::string mode = "exact";
    std::string experiment;
    std::string preset;
    std::string spec_path;
};

json load_json_arg(const std::string& flag, const std::string& text) {
    std::string body = text;
    if (text.empty() || text.front() != '{') {
        std::ifstream in(text);
        if (!in) {
            throw UsageError(flag + ": cannot read '" + text + "'");
        }
        std::stringstream ss;
        ss << in.rdbuf();
        body = ss.str();
    }
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw UsageError(flag + ": invalid JSON: " + e.what());
    }
}

Rational parse_flag_rational(const std::string& flag, const std::string& text) {
    try {
        return parse_rational(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

// Applies --seed (which wins) or the model's own seed; one of them must be
// given explicitly.
FiqModel resolve_model(const Options& opt, const json& model_json) {
    if (!opt.seed && !model_json.contains("seed")) {
        throw UsageError("--seed is required (or a \"seed\" field in the model)");
    }
    FiqModel model;
    try {
        model = model_from_json(model_json);
    } catch (const std::exception& e) {
        throw UsageError(std::string("--model: ") + e.what());
    }
    if (opt.seed) {
        const auto& src = source_of(model);
        model = with_source(model, RandomBitSource(*opt.seed, src.bias(), src.stream_id()));
    }
    return model;
}

std::filesystem::path output_dir(const Options& opt) {
    if (!opt.out_dir.empty()) return opt.out_dir;
    if (const char* env = std::getenv("FIQ_OUTPUT_DIR"); env && *env) return env;
    return {};
}

void write_outputs(const std::filesystem::path& dir,
                   const std::vector<std::pair<std::string, std::string>>& files) {
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    for (const auto& [name, contents] : files) {
        write_atomically(dir / name, contents);
    }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int run_sample(const Options& opt, std::ostream& out) {
    if (opt.depth == 0) throw UsageError("--depth must be at least 1");
    if (!opt.samples || *opt.samples == 0) throw UsageError("--samples must be at least 1");
    const FiqModel model = resolve_model(opt, load_json_arg("--model", opt.model));
    const std::size_t n = *opt.samples;

    const json config = {{"subcommand", "sample"}, {"model", model}, {"depth", opt.depth},
                         {"samples", n},           {"seed", source_of(model).seed()},
                         {"format", opt.format}};
    const auto rows = sample_rows(model, opt.depth, n, opt.threads);

    std::string csv;
    for (std::size_t j = 1; j <= opt.depth; ++j) {
        csv += (j > 1 ? ",bit_" : "bit_") + std::to_string(j);
    }
    csv += "\n";
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.bits.size(); ++j) {
            csv += j ? "," : "";
            csv += row.bits[j] ? '1' : '0';
        }
        csv += "\n";
    }
    json doc = {{"config", config}};
    if (opt.format == "json") {
        json data = json::array();
        for (const auto& row : rows) data.push_back(row.bits);
        doc["rows"] = std::move(data);
        out << dump(doc);
        write_outputs(output_dir(opt), {{"sample.json", dump(doc)}});
    } else {
        doc["data"] = "samples.csv";
        out << csv;
        write_outputs(output_dir(opt), {{"samples.csv", csv}, {"sample.json", dump(doc)}});
    }
    return kExitOk;
}

int run_measure(const Options& opt, std::ostream& out) {
    if (opt.depth < 2) throw UsageError("--depth must be at least 2");
    if (!opt.samples || *opt.samples < 100) throw UsageError("--samples must be at least 100");
    const std::size_t blocks = opt.blocks.value_or(std::min<std::size_t>(8, opt.depth));
    if (blocks < 2 || blocks > std::min(opt.depth, kMaxBlockLength)) {
        throw UsageError("--blocks must lie in [2, min(depth, 16)]");
    }
    const FiqModel model = resolve_model(opt, load_json_arg("--model", opt.model));
    const json config = {{"subcommand", "measure"}, {"model", model},
                         {"depth", opt.depth},      {"samples", *opt.samples},
                         {"seed", source_of(model).seed()}, {"blocks", blocks}};

    const auto rows = sample_rows(model, opt.depth, *opt.samples, opt.threads);
    const auto s = SampleMatrix::from_prefixes(rows, pooling_for(model));
    const auto correlation = correlation_report(s);
    json props = json::array();
    for (const auto& p : empirical_propensities(s)) {
        props.push_back({{"frequency", p.frequency}, {"half_width", p.half_width}});
    }
    const json doc = {
        {"config", config},
        {"pooling", s.pooling() == Pooling::Pooled ? "pooled" : "per-position"},
        {"empirical_propensities", props},
        {"info_report", info_report(s, blocks, generating_bits_count(model, opt.depth))},
        {"correlation_report", correlation}};
    out << dump(doc);

    std::vector<std::pair<std::string, std::string>> files{{"measure.json", dump(doc)}};
    if (opt.mi_csv) {
        std::ostringstream csv;
        csv.precision(17);
        for (const auto& row : correlation.mi_matrix) {
            for (std::size_t j = 0; j < row.size(); ++j) csv << (j ? "," : "") << row[j];
            csv << "\n";
        }
        files.emplace_back("mi_matrix.csv", csv.str());
    }
    write_outputs(output_dir(opt), files);
    return kExitOk;
}

int run_arith(const Options& opt, std::ostream& out) {
    const Rational c = parse_flag_rational("--constant", opt.constant);
    if (c <= 0) throw UsageError("--constant must be positive");
    if (opt.mode != "exact" && opt.mode != "sample") {
        throw UsageError("--mode must be exact or sample");
    }
    const bool exact = opt.mode == "exact";
    if (exact && opt.samples) throw UsageError("--samples conflicts with --mode exact");
    if (!exact && (!opt.samples || *opt.samples == 0)) {
        throw UsageError("--mode sample needs --samples >= 1");
    }
    const json model_json = load_json_arg("--model", opt.model);
    FiqModel model;
    if (exact) {
        // Exact enumeration draws nothing; the seed is irrelevant.
        Options seeded = opt;
        if (!seeded.seed && !model_json.contains("seed")) seeded.seed = 0;
        model = resolve_model(seeded, model_json);
    } else {
        model = resolve_model(opt, model_json);
    }

    json config = {{"subcommand", "arith"}, {"model", model}, {"constant", to_string(c)},
                   {"depth", opt.depth},    {"mode", opt.mode}};
    json dist = json::array();
    if (exact) {
        for (const auto& [digits, w] : scale_fiq_truncated(model, c, opt.depth, opt.threads)) {
            json e = digits;
            e["prob"] = to_string(w);
            dist.push_back(std::move(e));
        }
    } else {
        config["samples"] = *opt.samples;
        config["seed"] = source_of(model).seed();
        const auto n = static_cast<double>(*opt.samples);
        for (const auto& [digits, count] :
             scale_fiq_sampled(model, c, opt.depth, *opt.samples, opt.threads)) {
            json e = digits;
            e["prob"] = static_cast<double>(count) / n;
            dist.push_back(std::move(e));
        }
    }
    const json doc = {{"config", config}, {"digits_distribution", dist}};
    out << dump(doc);
    write_outputs(output_dir(opt), {{"arith.json", dump(doc)}});
    return kExitOk;
}

int run_experiment_cmd(const Options& opt, std::ostream& out) {
    ExperimentKind kind;
    try {
        kind = parse_kind(opt.experiment);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    ExperimentSpec spec;
    if (!opt.preset.empty()) {
        try {
            spec = preset(kind, opt.preset);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("--preset: ") + e.what());
        }
        if (!opt.seed) throw UsageError("--seed is required with --preset");
    } else {
        const json j = load_json_arg("--spec", opt.spec_path);
        if (!opt.seed && !j.contains("seed")) {
            throw UsageError("--seed is required (or a \"seed\" field in the spec)");
        }
        try {
            spec = spec_from_json(j);
        } catch (const std::exception& e) {
            throw UsageError(std::string("--spec: ") + e.what());
        }
        if (spec.kind != kind) {
            throw UsageError("--spec describes a " + kind_name(spec.kind) +
                             " experiment, not " + kind_name(kind));
        }
    }
    if (opt.seed) spec.seed = *opt.seed;
    if (opt.samples) spec.samples = *opt.samples;

    auto verdict = run_experiment(spec, opt.threads);
    const auto dir = output_dir(opt);
    std::vector<std::pair<std::string, std::string>> files;
    if (!dir.empty()) {
        for (const auto& [name, csv] : verdict.tables) {
            verdict.artifacts.push_back(name);
            files.emplace_back(name, csv);
        }
        verdict.artifacts.push_back("verdict.json");
    }
    const json doc = {{"config", {{"subcommand", "experiment"}, {"spec", spec}}},
                      {"verdict", verdict}};
    files.emplace_back("verdict.json", dump(doc));
    out << dump(doc);
    write_outputs(dir, files);
    return verdict.passed() ? kExitOk : kExitClaimFailed;
}

}  // namespace

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + tmp.string());
        f << contents;
        f.flush();
        if (!f) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite information quantities: sampling, measures, digit arithmetic, experiments",
                 "fiq"};
    app.require_subcommand(1);
    Options opt;

    auto common = [&](CLI::App* sub, bool needs_model) {
        auto* m = sub->add_option("--model", opt.model, "model JSON file or inline JSON object");
        if (needs_model) m->required();
        sub->add_option("--seed", opt.seed, "64-bit seed (required; no time-based default)");
        sub->add_option("--threads", opt.threads, "worker threads; results do not depend on it")
            ->check(CLI::Range(1u, 256u));
        sub->add_option("--out-dir", opt.out_dir, "output directory (default $FIQ_OUTPUT_DIR)");
    };

    auto* sample = app.add_subcommand("sample", "draw realized prefixes as CSV");
    common(sample, true);
    sample->add_option("--depth", opt.depth, "bits per realization")->required();
    sample->add_option("--samples", opt.samples, "number of realizations")->required();
    sample->add_option("--format", opt.format)->check(CLI::IsMember({"csv", "json"}));

    auto* measure = app.add_subcommand("measure", "information and correlation reports");
    common(measure, true);
    measure->add_option("--depth", opt.depth)->required();
    measure->add_option("--samples", opt.samples)->required();
    measure->add_option("--blocks", opt.blocks, "largest block length L_max (default min(8, depth))");
    measure->add_flag("--mi-csv", opt.mi_csv, "also write mi_matrix.csv to the output directory");

    auto* arith = app.add_subcommand("arith", "determined digits of c·Q");
    common(arith, true);
    arith->add_option("--constant", opt.constant, "positive rational p/q")->required();
    arith->add_option("--depth", opt.depth)->required();
    arith->add_option("--mode", opt.mode, "exact|sample");
    arith->add_option("--samples", opt.samples);

    auto* experiment = app.add_subcommand("experiment", "run a canned experiment");
    common(experiment, false);
    experiment->add_option("kind", opt.experiment, "units|majority|units-majority")->required();
    auto* pre = experiment->add_option("--preset", opt.preset, "named preset");
    auto* spec = experiment->add_option("--spec", opt.spec_path, "experiment spec JSON file");
    pre->excludes(spec);
    spec->excludes(pre);
    experiment->add_option("--samples", opt.samples, "override the Monte Carlo sample count");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
        if (experiment->parsed() && opt.preset.empty() && opt.spec_path.empty()) {
            throw UsageError("experiment needs --preset or --spec");
        }
        if (sample->parsed()) return run_sample(opt, out);
        if (measure->parsed()) return run_measure(opt, out);
        if (arith->parsed()) return run_arith(opt, out);
        return run_experiment_cmd(opt, out);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "fiq: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        err << "fiq: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::length_error& e) {
        err << "fiq: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace fiq::cli
