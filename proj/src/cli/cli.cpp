#include "taco/cli.hpp"

#include "taco/analysis.hpp"
#include "taco/concordance.hpp"
#include "taco/corpus.hpp"
#include "taco/digest.hpp"
#include "taco/error.hpp"
#include "taco/evaluation.hpp"
#include "taco/frequency.hpp"
#include "taco/gateway.hpp"
#include "taco/keyness.hpp"
#include "taco/prompting.hpp"
#include "taco/text.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace taco::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw io_error("READ_FAILED", "cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& p, std::string_view text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw io_error("WRITE_FAILED", "cannot write " + p.string());
}

json read_json(const fs::path& p) {
    try {
        return json::parse(read_text(p));
    } catch (const json::parse_error& e) {
        throw validation_error("BAD_JSON", p.string() + ": " + e.what());
    }
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

WindowSpec parse_window(const std::string& lr, const std::string& unit) {
    const auto parts = split(lr, ',');
    WindowSpec w;
    w.unit = window_unit_from_string(unit);
    try {
        if (parts.size() != 2) throw std::invalid_argument("shape");
        w.left = static_cast<std::uint32_t>(std::stoul(parts[0]));
        w.right = static_cast<std::uint32_t>(std::stoul(parts[1]));
    } catch (const std::exception&) {
        throw validation_error("BAD_WINDOW", "window must look like L,R, got " + lr);
    }
    w.validate();
    return w;
}

std::string now_iso8601() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Globals {
    std::string config;
    std::string out = ".";
    std::uint64_t seed = 42;
};

json load_config(const Globals& g) { return g.config.empty() ? json::object() : read_json(g.config); }

ModelConfig resolve_model(const json& config, const std::string& name, const std::string& fixtures) {
    const auto profiles = load_profiles(config);
    const auto it = profiles.find(name);
    if (it == profiles.end()) throw validation_error("UNKNOWN_MODEL", "no provider profile named " + name);
    auto mc = it->second;
    if (!fixtures.empty()) mc.fixture_dir = fixtures;
    return mc;
}

std::unique_ptr<Gateway> make_gateway(const ModelConfig& mc, bool offline, const json& config, const fs::path& out) {
    std::shared_ptr<Provider> provider =
        offline ? std::static_pointer_cast<Provider>(std::make_shared<UnreachableProvider>()) : make_provider(mc);
    const fs::path fallback = config.contains("cache_dir") ? fs::path(config.at("cache_dir").get<std::string>()) : out / "cache";
    return std::make_unique<Gateway>(std::move(provider), ResponseCache(cache_dir_from_env(fallback)));
}

json spec_to_json(const TaskSpec& s) {
    return {{"task", to_string(s.task)},         {"keyword_count", s.keyword_count}, {"node", s.node},
            {"node_display", s.node_display},    {"collocate_count", s.collocate_count},
            {"expressions", s.expressions},      {"line_count", s.line_count}};
}

json stage_to_json(AblationStage s) { return {{"level", s.level()}, {"label", s.label()}, {"slug", s.slug()}}; }

struct SpecFlags {
    std::size_t k = 0;
    std::string node;
    std::string node_display;
    std::vector<std::string> expressions;
};

TaskSpec spec_for(const ContextBundle& b, const SpecFlags& f) {
    TaskSpec s;
    s.task = b.task;
    switch (b.task) {
        case TaskKind::Keyword: s.keyword_count = f.k != 0 ? f.k : b.item_count; break;
        case TaskKind::Collocate:
            s.node = f.node;
            s.node_display = f.node_display;
            s.collocate_count = b.item_count;
            break;
        case TaskKind::Concordance:
            s.expressions = f.expressions;
            s.line_count = b.item_count;
            break;
    }
    s.validate();
    return s;
}

// Items back out of a bundle's numbered list ("1. word").
std::vector<std::string> items_from_block(const std::string& block) {
    std::vector<std::string> items;
    for (auto line : split_lines(block)) {
        const auto dot = line.find(". ");
        if (dot != std::string_view::npos) items.emplace_back(trim(line.substr(dot + 2)));
    }
    return items;
}

json prompt_to_json(const Prompt& p, const TaskSpec& spec) {
    json elements = json::array();
    for (const auto& e : p.elements) elements.push_back(element_slug(e.kind));
    return {{"format", "taco-prompt"},         {"version", 1},
            {"task", to_string(p.task)},       {"spec", spec_to_json(spec)},
            {"stage", stage_to_json(p.stage)}, {"elements", elements},
            {"context_digest", p.context_digest}, {"prompt_digest", sha256_hex(p.text)},
            {"text", p.text}};
}

json make_manifest(const std::string& run_id, const json& spec, const json& stage, const ModelConfig& mc,
                   const std::string& context_digest, const std::string& prompt_text, const ModelResponse& r,
                   const json& artifacts) {
    return {{"format", "taco-manifest"},
            {"version", 1},
            {"run_id", run_id},
            {"task", spec},
            {"stage", stage},
            {"model", mc.summary()},
            {"context_digest", context_digest},
            {"prompt_digest", sha256_hex(prompt_text)},
            {"request_digest", r.request_digest},
            {"response_digest", sha256_hex(r.text)},
            {"trial", r.trial},
            {"from_cache", r.from_cache},
            {"timestamps", {{"response_created_at", r.created_at}, {"manifest_written_at", now_iso8601()}}},
            {"artifacts", artifacts}};
}

json parse_envelope(TaskKind task, const std::string& text, std::size_t expect, const std::vector<std::string>& collocates) {
    switch (task) {
        case TaskKind::Keyword: return analysis_envelope(task, parse_keyword_analysis(text, static_cast<int>(expect)));
        case TaskKind::Collocate: return analysis_envelope(task, parse_collocate_analysis(text, collocates));
        case TaskKind::Concordance: return analysis_envelope(task, parse_concordance_analysis(text, static_cast<int>(expect)));
    }
    throw validation_error("BAD_TASK", "unknown task");
}

std::size_t fatal_count(const json& envelope) {
    std::size_t n = 0;
    for (const auto& v : envelope.at("violations")) n += v.at("severity") == "fatal" ? 1 : 0;
    return n;
}

std::vector<Quote> quotes_of(const json& envelope) {
    if (envelope.at("analysis").is_null()) throw validation_error("RUN_NOT_PARSED", "analysis has fatal violations");
    const auto& a = envelope.at("analysis");
    switch (task_kind_from_string(envelope.at("task").get<std::string>())) {
        case TaskKind::Keyword: return extract_quotes(KeywordAnalysis::from_json(a));
        case TaskKind::Collocate: return extract_quotes(CollocateAnalysis::from_json(a));
        case TaskKind::Concordance: return extract_quotes(ConcordanceAnalysis::from_json(a));
    }
    return {};
}

void emit_error(std::ostream& err, ErrorKind kind, const std::string& code, const std::string& message) {
    static const char* names[] = {"validation", "provider", "parse_fatal", "io"};
    err << json{{"error", {{"kind", names[static_cast<int>(kind)]}, {"code", code}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Corpus analysis pipeline with prompted language models", "taco"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config, "JSON config with provider profiles");
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_option("--seed", g.seed, "Seed for sampling")->capture_default_str();

    // ingest
    auto* ingest_cmd = app.add_subcommand("ingest", "Clean, filter and index a corpus");
    std::string ingest_input, text_column = "abstract", id_column, keep_language = "eng";
    bool no_lang_filter = false;
    ingest_cmd->add_option("--input", ingest_input, "CSV file or directory of .txt files")->required();
    ingest_cmd->add_option("--text-column", text_column)->capture_default_str();
    ingest_cmd->add_option("--id-column", id_column);
    ingest_cmd->add_option("--keep-language", keep_language)->capture_default_str();
    ingest_cmd->add_flag("--no-lang-filter", no_lang_filter);

    // freq
    auto* freq_cmd = app.add_subcommand("freq", "Frequency list of an indexed corpus");
    std::string corpus_dir;
    freq_cmd->add_option("--corpus", corpus_dir)->required();

    // keywords
    auto* kw_cmd = app.add_subcommand("keywords", "Keywords against one or two reference lists");
    std::string target_tsv, measure = "ll", stoplist_file, manual_file;
    std::vector<std::string> references;
    std::size_t top_n = 100;
    std::uint64_t min_count = 5;
    kw_cmd->add_option("--target", target_tsv)->required();
    kw_cmd->add_option("--reference", references)->required();
    kw_cmd->add_option("--measure", measure)->capture_default_str();
    kw_cmd->add_option("--top", top_n)->capture_default_str();
    kw_cmd->add_option("--min-count", min_count)->capture_default_str();
    kw_cmd->add_option("--stoplist", stoplist_file);
    kw_cmd->add_option("--manual", manual_file, "+token keeps, -token drops");

    // collocates
    auto* coll_cmd = app.add_subcommand("collocates", "Windowed collocates of a node word");
    std::string node, window = "5,5", unit = "words";
    bool keep_node = false;
    coll_cmd->add_option("--corpus", corpus_dir)->required();
    coll_cmd->add_option("--node", node)->required();
    coll_cmd->add_option("--window", window)->capture_default_str();
    coll_cmd->add_option("--unit", unit)->capture_default_str();
    coll_cmd->add_option("--top", top_n)->capture_default_str();
    coll_cmd->add_flag("--keep-node", keep_node, "Count node tokens inside the span");

    // concord
    auto* conc_cmd = app.add_subcommand("concord", "KWIC concordance of a node");
    std::string conc_window = "10,10";
    std::size_t sample_n = 0;
    conc_cmd->add_option("--corpus", corpus_dir)->required();
    conc_cmd->add_option("--node", node)->required();
    conc_cmd->add_option("--window", conc_window)->capture_default_str();
    conc_cmd->add_option("--unit", unit)->capture_default_str();
    conc_cmd->add_option("--sample", sample_n, "Reservoir-sample N lines (0 keeps all)");

    // prompt
    auto* prompt_cmd = app.add_subcommand("prompt", "Context bundles and prompts");
    prompt_cmd->require_subcommand(1);
    auto* ctx_cmd = prompt_cmd->add_subcommand("context", "Attach concordance context to items");
    std::string task_name, items_file, kwic_file;
    std::size_t per_item = 50;
    ctx_cmd->add_option("--task", task_name)->required();
    ctx_cmd->add_option("--corpus", corpus_dir)->required();
    ctx_cmd->add_option("--items", items_file, "keywords.tsv or collocates.tsv");
    ctx_cmd->add_option("--kwic", kwic_file, "concordance.tsv (concordance task)");
    ctx_cmd->add_option("--node", node, "node word (collocate task)");
    ctx_cmd->add_option("--per-item", per_item)->capture_default_str();
    ctx_cmd->add_option("--window", conc_window)->capture_default_str();
    ctx_cmd->add_option("--unit", unit)->capture_default_str();

    SpecFlags spec_flags;
    const auto add_spec_flags = [&](CLI::App* c) {
        c->add_option("--k", spec_flags.k, "Keyword count (defaults to the bundle size)");
        c->add_option("--node", spec_flags.node);
        c->add_option("--node-display", spec_flags.node_display);
        c->add_option("--expression", spec_flags.expressions, "Concordance expression, repeatable");
    };
    auto* build_cmd = prompt_cmd->add_subcommand("build", "Render a prompt for one ablation stage");
    std::string context_file, stage_name = "full";
    bool to_stdout = false;
    build_cmd->add_option("--context", context_file)->required();
    build_cmd->add_option("--stage", stage_name)->capture_default_str();
    build_cmd->add_flag("--stdout", to_stdout);
    add_spec_flags(build_cmd);

    // run
    auto* run_cmd = app.add_subcommand("run", "Send a built prompt to a model");
    std::string prompt_file, model_name = "mock", cache_mode = "use", fixtures;
    std::size_t trials = 1;
    bool offline = false;
    run_cmd->add_option("--prompt", prompt_file, "prompt.json from prompt build")->required();
    run_cmd->add_option("--model", model_name)->capture_default_str();
    run_cmd->add_option("--trials", trials)->capture_default_str();
    run_cmd->add_option("--cache", cache_mode)->capture_default_str();
    run_cmd->add_option("--fixtures", fixtures, "Mock provider response directory");
    run_cmd->add_flag("--offline", offline, "Fail on any provider contact");

    // parse
    auto* parse_cmd = app.add_subcommand("parse", "Validate a model output");
    std::string parse_input, collocate_list, save_path;
    std::size_t expect = 0;
    parse_cmd->add_option("--task", task_name)->required();
    parse_cmd->add_option("--expect", expect, "K for keyword, N for concordance");
    parse_cmd->add_option("--input", parse_input, "Model output file (default stdin)");
    parse_cmd->add_option("--collocates", collocate_list, "Collocate list sent in the prompt");
    parse_cmd->add_option("--save", save_path, "Also write the JSON here");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Scores, agreement and citation checks");
    eval_cmd->require_subcommand(1);
    std::string ratings_file, analysis_file;
    std::vector<std::string> exclude_ids, rows;
    double threshold = 0.85;
    std::optional<double> expect_alpha;
    double alpha_tolerance = 5e-4;
    auto* scores_cmd = eval_cmd->add_subcommand("scores", "Mean score per metric and run");
    scores_cmd->add_option("--ratings", ratings_file)->required();
    scores_cmd->add_option("--rows", rows, "Row order of the table");
    auto* alpha_cmd = eval_cmd->add_subcommand("alpha", "Ordinal Krippendorff alpha over run/metric units");
    alpha_cmd->add_option("--ratings", ratings_file)->required();
    alpha_cmd->add_option("--exclude", exclude_ids, "Unit id run/metric to leave out");
    alpha_cmd->add_option("--expect-alpha", expect_alpha, "Fail unless alpha matches this target");
    alpha_cmd->add_option("--tolerance", alpha_tolerance)->capture_default_str();
    auto* fid_cmd = eval_cmd->add_subcommand("fidelity", "Check quotes in an analysis against the corpus");
    fid_cmd->add_option("--analysis", analysis_file)->required();
    fid_cmd->add_option("--corpus", corpus_dir)->required();
    fid_cmd->add_option("--threshold", threshold)->capture_default_str();

    // ablate
    auto* ablate_cmd = app.add_subcommand("ablate", "Run all six prompt stages");
    ablate_cmd->add_option("--task", task_name);
    ablate_cmd->add_option("--context", context_file)->required();
    ablate_cmd->add_option("--model", model_name)->capture_default_str();
    ablate_cmd->add_option("--cache", cache_mode)->capture_default_str();
    ablate_cmd->add_option("--fixtures", fixtures);
    ablate_cmd->add_flag("--offline", offline);
    add_spec_flags(ablate_cmd);

    // stability
    auto* stab_cmd = app.add_subcommand("stability", "Agreement across repeated runs");
    std::vector<std::string> run_files;
    std::vector<int> exclude_lines;
    stab_cmd->add_option("--runs", run_files, "analysis.json files")->required();
    stab_cmd->add_option("--exclude", exclude_lines, "Concordance line ids to leave out");

    std::vector<const char*> argv{"taco"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        emit_error(err, ErrorKind::Validation, "BAD_ARGUMENTS", e.what());
        return exit_code_for(ErrorKind::Validation);
    }

    const fs::path out_dir = g.out;
    try {
        if (ingest_cmd->parsed()) {
            const fs::path input = ingest_input;
            std::vector<RawRecord> records;
            if (fs::is_directory(input)) {
                records = read_txt_directory(input);
            } else {
                CsvOptions co;
                co.text_column = text_column;
                co.id_column = id_column;
                records = read_csv(input, co);
            }
            IngestOptions io;
            io.lang_filter = !no_lang_filter;
            io.keep_language = keep_language;
            auto result = ingest(records, io);
            save_corpus(result.corpus, out_dir / "corpus");
            const auto report = result.report.to_json();
            write_json(out_dir / "ingest_report.json", report);
            out << report.dump(2) << '\n';
        } else if (freq_cmd->parsed()) {
            const auto corpus = load_corpus(corpus_dir);
            const auto list = build_frequency_list(corpus);
            fs::create_directories(out_dir);
            std::ofstream f(out_dir / "frequency.tsv", std::ios::binary | std::ios::trunc);
            write_frequency_tsv(list, f);
            out << json{{"frequency", (out_dir / "frequency.tsv").string()},
                        {"tokens", list.total_tokens()},
                        {"types", list.entries().size()}}
                       .dump()
                << '\n';
        } else if (kw_cmd->parsed()) {
            if (references.size() > 2) throw validation_error("TOO_MANY_REFERENCES", "at most two reference lists");
            const auto target = read_frequency_tsv(fs::path(target_tsv));
            KeywordOptions ko;
            ko.measure = keyness_measure_from_string(measure);
            ko.top_n = top_n;
            ko.min_target_count = min_count;
            std::vector<KeywordList> lists;
            for (const auto& r : references) {
                ko.reference_id = fs::path(r).stem().string();
                lists.push_back(extract_keywords(target, read_frequency_tsv(fs::path(r)), ko));
            }
            const auto stop = stoplist_file.empty() ? std::set<std::string>{} : read_stoplist(fs::path(stoplist_file));
            const auto manual = manual_file.empty() ? ManualFilter{} : read_manual_filter(manual_file);
            const bool filtered = lists.size() == 2 || !stop.empty() || !manual.keep.empty() || !manual.drop.empty();
            const auto final_list = filtered ? intersect_keyword_lists(lists.front(), lists.back(), stop, manual) : lists.front();
            fs::create_directories(out_dir);
            if (lists.size() == 2) {
                for (const auto& l : lists) {
                    std::ofstream f(out_dir / ("keywords_" + l.reference_id + ".tsv"), std::ios::binary | std::ios::trunc);
                    write_keyword_tsv(l, f);
                }
            }
            std::ofstream f(out_dir / "keywords.tsv", std::ios::binary | std::ios::trunc);
            write_keyword_tsv(final_list, f);
            out << json{{"keywords", (out_dir / "keywords.tsv").string()}, {"count", final_list.entries.size()}}.dump() << '\n';
        } else if (coll_cmd->parsed()) {
            const auto corpus = load_corpus(corpus_dir);
            CollocateOptions co;
            co.top_n = top_n;
            co.exclude_node = !keep_node;
            const auto entries = collocates(corpus, node, parse_window(window, unit), co);
            write_text(out_dir / "collocates.tsv", render_collocate_tsv(entries));
            out << json{{"collocates", (out_dir / "collocates.tsv").string()}, {"count", entries.size()}}.dump() << '\n';
        } else if (conc_cmd->parsed()) {
            const auto corpus = load_corpus(corpus_dir);
            auto lines = concordance(corpus, node, parse_window(conc_window, unit));
            if (sample_n > 0) lines = sample_concordances(lines, sample_n, g.seed);
            write_text(out_dir / "concordance.tsv", render_kwic(lines, KwicFormat::Tsv));
            out << json{{"concordance", (out_dir / "concordance.tsv").string()}, {"lines", lines.size()}}.dump() << '\n';
        } else if (ctx_cmd->parsed()) {
            const auto task = task_kind_from_string(task_name);
            const auto corpus = load_corpus(corpus_dir);
            const auto w = parse_window(conc_window, unit);
            ContextBundle bundle;
            if (task == TaskKind::Concordance) {
                if (kwic_file.empty()) throw validation_error("MISSING_OPTION", "--kwic is required for the concordance task");
                const auto lines = parse_kwic_tsv(read_text(kwic_file));
                std::vector<std::string> originals;
                for (const auto& l : lines) {
                    const auto d = corpus.find(l.doc_id);
                    if (!d) throw validation_error("UNKNOWN_DOCUMENT", "concordance line cites unknown document " + l.doc_id);
                    originals.push_back(corpus.documents()[*d].text);
                }
                bundle = attach_concordance_context(lines, originals);
            } else {
                if (items_file.empty()) throw validation_error("MISSING_OPTION", "--items is required");
                const auto items = read_keyword_tokens(items_file);
                std::vector<std::vector<ConcordanceLine>> kwic;
                std::vector<ConcordanceLine> node_lines;
                if (task == TaskKind::Collocate) {
                    if (node.empty()) throw validation_error("MISSING_OPTION", "--node is required for the collocate task");
                    node_lines = concordance(corpus, node, w);
                }
                for (std::size_t i = 0; i < items.size(); ++i) {
                    std::vector<ConcordanceLine> lines;
                    if (task == TaskKind::Keyword) {
                        lines = concordance(corpus, items[i], w);
                    } else {
                        for (const auto& l : node_lines) {
                            const auto toks = token_strings(l.left + " " + l.right, corpus.policy());
                            if (std::find(toks.begin(), toks.end(), items[i]) != toks.end()) lines.push_back(l);
                        }
                    }
                    if (per_item > 0 && lines.size() > per_item) lines = sample_concordances(lines, per_item, g.seed + i);
                    kwic.push_back(std::move(lines));
                }
                bundle = task == TaskKind::Keyword ? attach_keyword_context(items, kwic) : attach_collocate_context(items, kwic);
            }
            write_json(out_dir / "context.json", bundle.to_json());
            out << json{{"context", (out_dir / "context.json").string()}, {"items", bundle.item_count}, {"digest", bundle.digest}}.dump()
                << '\n';
        } else if (build_cmd->parsed()) {
            const auto bundle = ContextBundle::from_json(read_json(context_file));
            const auto spec = spec_for(bundle, spec_flags);
            const auto prompt = build_prompt(spec, AblationStage::from_string(stage_name), &bundle);
            if (to_stdout) {
                out << prompt.text;
            } else {
                write_text(out_dir / "prompt.txt", prompt.text);
                write_json(out_dir / "prompt.json", prompt_to_json(prompt, spec));
                out << json{{"prompt", (out_dir / "prompt.json").string()}, {"stage", prompt.stage.label()}}.dump() << '\n';
            }
        } else if (run_cmd->parsed()) {
            const auto config = load_config(g);
            const auto pj = read_json(prompt_file);
            if (pj.value("format", "") != "taco-prompt") throw validation_error("BAD_PROMPT", prompt_file + " is not a prompt.json");
            const auto text = pj.at("text").get<std::string>();
            const auto mc = resolve_model(config, model_name, fixtures);
            auto gw = make_gateway(mc, offline, config, out_dir);
            const auto batch = gw->run_repeated(text, mc, trials, cache_mode_from_string(cache_mode));
            json manifests = json::array();
            for (const auto& r : batch.responses) {
                const auto run_id = "run-" + r.request_digest.substr(0, 12) + "-t" + std::to_string(r.trial);
                const auto dir = out_dir / "runs" / run_id;
                write_text(dir / "response.txt", r.text);
                const auto m = make_manifest(run_id, pj.at("spec"), pj.at("stage"), mc, pj.at("context_digest"), text, r,
                                             {{"prompt", fs::absolute(prompt_file).string()}, {"response", "response.txt"}});
                write_json(dir / "manifest.json", m);
                manifests.push_back(m);
            }
            out << manifests.dump(2) << '\n';
            if (!batch.errors.empty()) {
                std::string msg = join(batch.errors, "; ");
                emit_error(err, ErrorKind::Provider, "TRIALS_FAILED", msg);
                return exit_code_for(ErrorKind::Provider);
            }
        } else if (parse_cmd->parsed()) {
            const auto task = task_kind_from_string(task_name);
            std::string text;
            if (parse_input.empty()) {
                std::ostringstream ss;
                ss << in.rdbuf();
                text = ss.str();
            } else {
                text = read_text(parse_input);
            }
            std::vector<std::string> inputs;
            if (!collocate_list.empty()) inputs = read_keyword_tokens(collocate_list);
            if (task != TaskKind::Collocate && expect == 0) throw validation_error("MISSING_OPTION", "--expect is required");
            const auto env = parse_envelope(task, text, expect, inputs);
            if (!save_path.empty()) write_json(save_path, env);
            out << env.dump(2) << '\n';
            if (const auto fatal = fatal_count(env); fatal > 0) {
                emit_error(err, ErrorKind::ParseFatal, "PARSE_FATAL", std::to_string(fatal) + " fatal violation(s)");
                return exit_code_for(ErrorKind::ParseFatal);
            }
        } else if (scores_cmd->parsed()) {
            const auto ratings = read_ratings_tsv(ratings_file);
            const auto cards = aggregate_by_run(ratings);
            json j = json::object();
            for (const auto& [run, card] : cards) j[run] = card.to_json();
            write_json(out_dir / "scores.json", j);
            out << render_score_table(cards, rows);
        } else if (alpha_cmd->parsed()) {
            auto data = reliability_from_ratings(read_ratings_tsv(ratings_file));
            data = exclude_units(data, std::set<std::string>(exclude_ids.begin(), exclude_ids.end()));
            const double alpha = krippendorff_alpha_ordinal(data);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6f", alpha);
            out << buf << '\n';
            if (expect_alpha && std::abs(alpha - *expect_alpha) > alpha_tolerance) {
                throw validation_error("ALPHA_MISMATCH", std::string("alpha ") + buf + " differs from the expected target");
            }
        } else if (fid_cmd->parsed()) {
            const auto corpus = load_corpus(corpus_dir);
            const FidelityIndex index(corpus);
            json verdicts = json::array();
            std::map<std::string, std::size_t> tally{{"Exact", 0}, {"Fuzzy", 0}, {"NotFound", 0}};
            for (const auto& q : quotes_of(read_json(analysis_file))) {
                auto v = index.check(q.text, threshold).to_json();
                v["source"] = q.source;
                ++tally[v.at("status").get<std::string>()];
                verdicts.push_back(std::move(v));
            }
            const json report{{"threshold", threshold}, {"summary", tally}, {"verdicts", verdicts}};
            write_json(out_dir / "fidelity.json", report);
            out << report.dump(2) << '\n';
        } else if (ablate_cmd->parsed()) {
            const auto config = load_config(g);
            const auto bundle = ContextBundle::from_json(read_json(context_file));
            if (!task_name.empty() && task_kind_from_string(task_name) != bundle.task) {
                throw validation_error("TASK_MISMATCH", "context bundle is for the " + to_string(bundle.task) + " task");
            }
            const auto spec = spec_for(bundle, spec_flags);
            const auto mc = resolve_model(config, model_name, fixtures);
            auto gw = make_gateway(mc, offline, config, out_dir);
            const auto mode = cache_mode_from_string(cache_mode);
            const auto inputs = items_from_block(bundle.items_block);
            const std::size_t expected = spec.task == TaskKind::Keyword ? spec.keyword_count : spec.line_count;
            const auto base = out_dir / "ablation" / to_string(spec.task);
            json index = json::array();
            std::string table = "stage\trun_id";
            for (auto m : kAllMetrics) table += "\t" + to_string(m);
            table += "\tTotal\n";
            for (const auto& p : compose_ablation(spec, bundle)) {
                const auto run_id = to_string(spec.task) + "-" + std::to_string(p.stage.level()) + "-" + p.stage.slug();
                const auto dir = base / (std::to_string(p.stage.level()) + "_" + p.stage.slug());
                write_text(dir / "prompt.txt", p.text);
                const auto r = mode == CacheMode::Use ? gw->complete(p.text, mc) : gw->run_repeated(p.text, mc, 1, mode).responses.at(0);
                write_text(dir / "response.txt", r.text);
                const auto env = parse_envelope(spec.task, r.text, expected, inputs);
                write_json(dir / "analysis.json", env);
                const auto m = make_manifest(run_id, spec_to_json(spec), stage_to_json(p.stage), mc, p.context_digest, p.text, r,
                                             {{"prompt", "prompt.txt"}, {"response", "response.txt"}, {"analysis", "analysis.json"}});
                write_json(dir / "manifest.json", m);
                index.push_back({{"run_id", run_id},
                                 {"stage", p.stage.label()},
                                 {"dir", fs::relative(dir, base).string()},
                                 {"parsed", !env.at("analysis").is_null()},
                                 {"violations", env.at("violations").size()}});
                table += p.stage.label() + "\t" + run_id + "\t\t\t\t\t\n";
            }
            write_json(base / "index.json", index);
            write_text(base / "score_table.tsv", table);
            out << index.dump(2) << '\n';
        } else if (stab_cmd->parsed()) {
            std::vector<json> envs;
            for (const auto& f : run_files) envs.push_back(read_json(f));
            StabilityReport report;
            if (!exclude_lines.empty()) {
                std::vector<ConcordanceAnalysis> runs;
                for (const auto& e : envs) {
                    if (e.at("task") != "concordance") throw validation_error("BAD_EXCLUSION", "--exclude applies to concordance runs");
                    if (e.at("analysis").is_null()) throw validation_error("RUN_NOT_PARSED", "a run has no analysis");
                    runs.push_back(ConcordanceAnalysis::from_json(e.at("analysis")));
                }
                report = stability(exclude_units(runs, std::set<int>(exclude_lines.begin(), exclude_lines.end())));
            } else {
                report = stability_from_envelopes(envs);
            }
            write_json(out_dir / "stability.json", report.to_json());
            out << report.to_json().dump(2) << '\n';
        }
    } catch (const Error& e) {
        emit_error(err, e.kind(), e.code(), e.what());
        return exit_code_for(e.kind());
    } catch (const json::exception& e) {
        emit_error(err, ErrorKind::Validation, "BAD_JSON", e.what());
        return exit_code_for(ErrorKind::Validation);
    } catch (const fs::filesystem_error& e) {
        emit_error(err, ErrorKind::Io, "FILESYSTEM", e.what());
        return exit_code_for(ErrorKind::Io);
    }
    return 0;
}

}  // namespace taco::cli
