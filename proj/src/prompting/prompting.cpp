#include "taco/prompting.hpp"

#include "taco/assets.hpp"
#include "taco/digest.hpp"
#include "taco/error.hpp"

#include <fstream>
#include <sstream>

namespace taco {

std::string to_string(TaskKind t) {
    switch (t) {
        case TaskKind::Keyword: return "keyword";
        case TaskKind::Collocate: return "collocate";
        case TaskKind::Concordance: return "concordance";
    }
    return "keyword";
}

TaskKind task_kind_from_string(const std::string& s) {
    if (s == "keyword" || s == "keywords") return TaskKind::Keyword;
    if (s == "collocate" || s == "collocates") return TaskKind::Collocate;
    if (s == "concordance" || s == "concordances") return TaskKind::Concordance;
    throw validation_error("BAD_TASK", "unknown task: " + s);
}

std::string element_name(ElementKind k) {
    switch (k) {
        case ElementKind::RoleDescription: return "Role Description";
        case ElementKind::TaskDefinition: return "Task Definition";
        case ElementKind::TaskProcedures: return "Task Procedures";
        case ElementKind::OutputFormat: return "Output Format";
        case ElementKind::ContextualInformation: return "Contextual Information";
    }
    return {};
}

std::string element_slug(ElementKind k) {
    switch (k) {
        case ElementKind::RoleDescription: return "role_description";
        case ElementKind::TaskDefinition: return "task_definition";
        case ElementKind::TaskProcedures: return "task_procedures";
        case ElementKind::OutputFormat: return "output_format";
        case ElementKind::ContextualInformation: return "contextual_information";
    }
    return {};
}

namespace {

constexpr std::array<const char*, 6> kStageSlugs{"baseline", "rd", "td", "tp", "ci", "of"};
constexpr std::array<const char*, 6> kStageLabels{"B.", "+R.D.", "+T.D.", "+T.P.", "+C.I.", "+O.F."};

}  // namespace

AblationStage AblationStage::from_string(const std::string& s) {
    for (int i = 0; i < 6; ++i) {
        if (s == kStageSlugs[i] || s == kStageLabels[i] || s == std::to_string(i)) return AblationStage(i);
    }
    if (s == "full") return AblationStage(5);
    throw validation_error("BAD_STAGE", "unknown ablation stage: " + s);
}

bool AblationStage::includes(ElementKind k) const {
    for (int i = 0; i < level_; ++i) {
        if (kAblationOrder[static_cast<std::size_t>(i)] == k) return true;
    }
    return false;
}

std::string AblationStage::label() const { return kStageLabels.at(static_cast<std::size_t>(level_)); }
std::string AblationStage::slug() const { return kStageSlugs.at(static_cast<std::size_t>(level_)); }

std::array<AblationStage, 6> AblationStage::all() {
    return {AblationStage(0), AblationStage(1), AblationStage(2), AblationStage(3), AblationStage(4), AblationStage(5)};
}

void TaskSpec::validate() const {
    const auto missing = [](const char* slot) {
        return validation_error("MISSING_SLOT", std::string("task parameter '") + slot + "' is required");
    };
    switch (task) {
        case TaskKind::Keyword:
            if (keyword_count == 0) throw missing("K");
            break;
        case TaskKind::Collocate:
            if (node.empty()) throw missing("node");
            if (collocate_count == 0) throw missing("collocate_count");
            break;
        case TaskKind::Concordance:
            if (expressions.empty()) throw missing("expressions");
            if (line_count == 0) throw missing("line_count");
            break;
    }
}

namespace {

ContextBundle finish_bundle(TaskKind task, std::size_t count, std::string items, std::string context) {
    ContextBundle b{task, count, std::move(items), std::move(context), {}};
    b.digest = sha256_hex(to_string(task) + "\n" + b.items_block + '\0' + b.context_block);
    return b;
}

ContextBundle attach_item_context(TaskKind task, const char* label, const std::vector<std::string>& items,
                                  const std::vector<std::vector<ConcordanceLine>>& kwic) {
    if (items.empty()) throw validation_error("EMPTY_CONTEXT", std::string("no ") + label + "s to attach");
    if (items.size() != kwic.size()) {
        throw validation_error("CONTEXT_MISMATCH", std::to_string(items.size()) + " " + label + "s but " +
                                                       std::to_string(kwic.size()) + " concordance blocks");
    }
    std::ostringstream list, context;
    for (std::size_t i = 0; i < items.size(); ++i) {
        list << i + 1 << ". " << items[i] << '\n';
        if (i) context << '\n';
        context << (task == TaskKind::Keyword ? "Keyword " : "Collocate ") << i + 1 << ": " << items[i] << '\n'
                << render_kwic(kwic[i], KwicFormat::PromptBlock);
    }
    return finish_bundle(task, items.size(), list.str(), context.str());
}

std::string kwic_text(const ConcordanceLine& l) {
    std::string out;
    for (const auto* part : {&l.left, &l.node, &l.right}) {
        if (part->empty()) continue;
        if (!out.empty()) out.push_back(' ');
        out += *part;
    }
    return out;
}

}  // namespace

ContextBundle attach_keyword_context(const std::vector<std::string>& keywords,
                                     const std::vector<std::vector<ConcordanceLine>>& kwic) {
    return attach_item_context(TaskKind::Keyword, "keyword", keywords, kwic);
}

ContextBundle attach_collocate_context(const std::vector<std::string>& collocates,
                                       const std::vector<std::vector<ConcordanceLine>>& kwic) {
    return attach_item_context(TaskKind::Collocate, "collocate", collocates, kwic);
}

ContextBundle attach_concordance_context(const std::vector<ConcordanceLine>& lines,
                                         const std::vector<std::string>& original_texts) {
    if (lines.empty()) throw validation_error("EMPTY_CONTEXT", "no concordance lines to attach");
    if (lines.size() != original_texts.size()) {
        throw validation_error("CONTEXT_MISMATCH", std::to_string(lines.size()) + " concordance lines but " +
                                                       std::to_string(original_texts.size()) + " original texts");
    }
    std::ostringstream list, context;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        list << "Concordance line " << i + 1 << ": " << kwic_text(lines[i]) << '\n';
        if (i) context << '\n';
        context << "Concordance line " << i + 1 << ": " << kwic_text(lines[i]) << '\n'
                << "Original text: " << original_texts[i] << '\n';
    }
    return finish_bundle(TaskKind::Concordance, lines.size(), list.str(), context.str());
}

nlohmann::json ContextBundle::to_json() const {
    return {{"format", "taco-context"}, {"version", 1},           {"task", to_string(task)}, {"item_count", item_count},
            {"items_block", items_block},   {"context_block", context_block}, {"digest", digest}};
}

ContextBundle ContextBundle::from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "taco-context") throw validation_error("BAD_CONTEXT", "not a context bundle");
    auto b = finish_bundle(task_kind_from_string(j.at("task").get<std::string>()), j.at("item_count").get<std::size_t>(),
                           j.at("items_block").get<std::string>(), j.at("context_block").get<std::string>());
    if (b.digest != j.at("digest").get<std::string>()) {
        throw validation_error("CONTEXT_DIGEST_MISMATCH", "context bundle digest does not match its contents");
    }
    return b;
}

const TemplateSet& TemplateSet::builtin() {
    static const TemplateSet set = [] {
        TemplateSet s;
        for (const auto task : {TaskKind::Keyword, TaskKind::Collocate, TaskKind::Concordance}) {
            std::vector<std::string> stems{"baseline"};
            for (const auto k : kCanonicalOrder) {
                if (k != ElementKind::ContextualInformation) stems.push_back(element_slug(k));
            }
            for (const auto& stem : stems) {
                const auto text = assets::find("templates/" + to_string(task) + "/" + stem + ".txt");
                if (!text) throw std::logic_error("missing template asset " + to_string(task) + "/" + stem);
                s.texts_[{task, stem}] = std::string(trim(*text));
            }
        }
        return s;
    }();
    return set;
}

TemplateSet TemplateSet::load_directory(const std::filesystem::path& dir) {
    TemplateSet s = builtin();
    for (auto& [key, text] : s.texts_) {
        const auto file = dir / to_string(key.first) / (key.second + ".txt");
        std::ifstream in(file, std::ios::binary);
        if (!in) throw io_error("READ_FAILED", "missing template " + file.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        text = std::string(trim(ss.str()));
    }
    return s;
}

const std::string& TemplateSet::element(TaskKind task, ElementKind kind) const {
    const auto it = texts_.find({task, element_slug(kind)});
    if (it == texts_.end()) throw validation_error("MISSING_TEMPLATE", "no template for " + element_slug(kind));
    return it->second;
}

const std::string& TemplateSet::baseline(TaskKind task) const { return texts_.at({task, "baseline"}); }

std::string fill_slots(const std::string& text, const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const auto open = text.find('{', i);
        if (open == std::string::npos) {
            out.append(text, i, std::string::npos);
            break;
        }
        const auto close = text.find('}', open);
        out.append(text, i, open - i);
        if (close == std::string::npos) {
            out.append(text, open, std::string::npos);
            break;
        }
        const auto name = text.substr(open + 1, close - open - 1);
        const bool is_slot = !name.empty() && name.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_0123456789") == std::string::npos;
        if (!is_slot) {
            out.push_back('{');
            i = open + 1;
            continue;
        }
        const auto it = values.find(name);
        if (it == values.end()) throw validation_error("MISSING_SLOT", "template slot {" + name + "} has no value");
        out += it->second;
        i = close + 1;
    }
    return out;
}

namespace {

std::string quoted_expressions(const std::vector<std::string>& exprs) {
    std::string out;
    for (std::size_t i = 0; i < exprs.size(); ++i) {
        if (i) out += i + 1 == exprs.size() ? " or " : ", ";
        out += "\"" + exprs[i] + "\"";
    }
    return out;
}

std::string capitalized(const std::string& s) {
    std::string out = s;
    if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
    return out;
}

std::map<std::string, std::string> slot_values(const TaskSpec& spec, bool with_context) {
    std::map<std::string, std::string> v;
    switch (spec.task) {
        case TaskKind::Keyword:
            v["K"] = std::to_string(spec.keyword_count);
            break;
        case TaskKind::Collocate:
            v["node"] = spec.node;
            v["node_display"] = spec.node_display.empty() ? capitalized(spec.node) : spec.node_display;
            v["collocate_count"] = std::to_string(spec.collocate_count);
            v["ctx_concordance_lines"] = with_context ? " and their corresponding concordance lines" : "";
            break;
        case TaskKind::Concordance:
            v["expressions"] = quoted_expressions(spec.expressions);
            v["ctx_original_text"] = with_context ? ", and also the original text from which the concordance lines are retrieved" : "";
            v["ctx_refer_original"] = with_context ? ", by referring to the original text" : "";
            break;
    }
    return v;
}

std::size_t expected_items(const TaskSpec& spec) {
    switch (spec.task) {
        case TaskKind::Keyword: return spec.keyword_count;
        case TaskKind::Collocate: return spec.collocate_count;
        case TaskKind::Concordance: return spec.line_count;
    }
    return 0;
}

}  // namespace

Prompt build_prompt(const TaskSpec& spec, AblationStage stage, const ContextBundle* context, const TemplateSet& templates) {
    spec.validate();
    if (stage.level() < 0 || stage.level() > 5) throw validation_error("BAD_STAGE", "stage level must be 0..5");
    const bool with_context = stage.includes(ElementKind::ContextualInformation);
    if (with_context && (context == nullptr || context->context_block.empty())) {
        throw validation_error("MISSING_CONTEXT", "stage " + stage.label() + " needs contextual information");
    }
    if (context != nullptr) {
        if (context->task != spec.task) throw validation_error("CONTEXT_MISMATCH", "context was rendered for a different task");
        if (context->item_count != expected_items(spec)) {
            throw validation_error("COUNT_MISMATCH", "prompt announces " + std::to_string(expected_items(spec)) +
                                                         " items but the context holds " + std::to_string(context->item_count));
        }
    }
    const auto values = slot_values(spec, with_context);

    Prompt p;
    p.task = spec.task;
    p.stage = stage;
    p.context_digest = context ? context->digest : std::string{};
    std::vector<std::string> parts;
    for (const auto kind : kCanonicalOrder) {
        if (!stage.includes(kind)) continue;
        PromptElement e{kind, "# " + element_name(kind), {}};
        e.body = kind == ElementKind::ContextualInformation ? std::string(trim(context->context_block))
                                                            : fill_slots(templates.element(spec.task, kind), values);
        parts.push_back(e.header + "\n\n" + e.body);
        p.elements.push_back(std::move(e));
    }
    // The baseline instruction stands in for the task definition until one is added.
    if (!stage.includes(ElementKind::TaskDefinition)) parts.push_back(fill_slots(templates.baseline(spec.task), values));
    if (!with_context && context != nullptr && !context->items_block.empty()) {
        parts.emplace_back(trim(context->items_block));
    }
    p.text = join(parts, "\n\n") + "\n";
    return p;
}

std::vector<Prompt> compose_ablation(const TaskSpec& spec, const ContextBundle& context, const TemplateSet& templates) {
    std::vector<Prompt> out;
    for (const auto stage : AblationStage::all()) out.push_back(build_prompt(spec, stage, &context, templates));
    return out;
}

}  // namespace taco
