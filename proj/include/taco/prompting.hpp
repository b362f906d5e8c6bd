#pragma once

#include "taco/concordance.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace taco {

enum class TaskKind { Keyword, Collocate, Concordance };

std::string to_string(TaskKind t);
TaskKind task_kind_from_string(const std::string& s);

enum class ElementKind { RoleDescription, TaskDefinition, TaskProcedures, OutputFormat, ContextualInformation };

/// "Role Description", "Task Definition", ...
std::string element_name(ElementKind k);
/// Asset file stem: "role_description", ...
std::string element_slug(ElementKind k);

/// Order in which elements are rendered into a prompt.
inline constexpr std::array<ElementKind, 5> kCanonicalOrder{
    ElementKind::RoleDescription, ElementKind::TaskDefinition, ElementKind::TaskProcedures,
    ElementKind::OutputFormat, ElementKind::ContextualInformation};

/// Order in which the ablation ladder adds elements.
inline constexpr std::array<ElementKind, 5> kAblationOrder{
    ElementKind::RoleDescription, ElementKind::TaskDefinition, ElementKind::TaskProcedures,
    ElementKind::ContextualInformation, ElementKind::OutputFormat};

struct PromptElement {
    ElementKind kind;
    std::string header;  ///< "# <Element Name>"
    std::string body;

    bool operator==(const PromptElement&) const = default;
};

/// Rung of the ablation ladder: 0 = Baseline, 5 = all five elements.
class AblationStage {
public:
    constexpr explicit AblationStage(int level = 5) : level_(level) {}
    static AblationStage from_string(const std::string& s);

    int level() const { return level_; }
    bool includes(ElementKind k) const;
    /// "B.", "+R.D.", "+T.D.", "+T.P.", "+C.I.", "+O.F."
    std::string label() const;
    /// "baseline", "rd", "td", "tp", "ci", "of"
    std::string slug() const;

    static std::array<AblationStage, 6> all();
    bool operator==(const AblationStage&) const = default;

private:
    int level_;
};

struct TaskSpec {
    TaskKind task = TaskKind::Keyword;
    std::size_t keyword_count = 0;          ///< K, keyword task
    std::string node;                       ///< collocate task node word, e.g. "china"
    std::string node_display;               ///< defaults to node with an initial capital
    std::size_t collocate_count = 0;        ///< collocate task
    std::vector<std::string> expressions;   ///< concordance task, e.g. {"China virus", "Chinese virus"}
    std::size_t line_count = 0;             ///< concordance task

    /// Throws naming the first missing parameter.
    void validate() const;
};

/// Rendered contextual data for one task plus a stable digest.
struct ContextBundle {
    TaskKind task = TaskKind::Keyword;
    std::size_t item_count = 0;
    /// Bare item list appended to prompts without Contextual Information.
    std::string items_block;
    /// Full body of the Contextual Information element.
    std::string context_block;
    std::string digest;

    nlohmann::json to_json() const;
    /// Throws CONTEXT_DIGEST_MISMATCH when the stored digest does not match the blocks.
    static ContextBundle from_json(const nlohmann::json& j);
};

/// Keyword task: keywords with their sampled KWIC lines, one block each.
ContextBundle attach_keyword_context(const std::vector<std::string>& keywords,
                                     const std::vector<std::vector<ConcordanceLine>>& kwic);
/// Collocate task: collocates with their sampled KWIC lines.
ContextBundle attach_collocate_context(const std::vector<std::string>& collocates,
                                       const std::vector<std::vector<ConcordanceLine>>& kwic);
/// Concordance task: each line with the full text it was taken from.
ContextBundle attach_concordance_context(const std::vector<ConcordanceLine>& lines,
                                         const std::vector<std::string>& original_texts);

/// Template text per (task, element) plus the task's baseline instruction.
class TemplateSet {
public:
    /// Templates compiled into the binary.
    static const TemplateSet& builtin();
    /// Same layout as data/templates: <task>/<element_slug>.txt and <task>/baseline.txt.
    static TemplateSet load_directory(const std::filesystem::path& dir);

    const std::string& element(TaskKind task, ElementKind kind) const;
    const std::string& baseline(TaskKind task) const;

private:
    std::map<std::pair<TaskKind, std::string>, std::string> texts_;
};

/// Replaces every `{name}` slot; an unknown slot throws MISSING_SLOT.
std::string fill_slots(const std::string& text, const std::map<std::string, std::string>& values);

struct Prompt {
    TaskKind task = TaskKind::Keyword;
    AblationStage stage;
    std::vector<PromptElement> elements;  ///< canonical render order
    std::string text;
    std::string context_digest;
};

/// Renders one rung of the ladder. Stages with Contextual Information
/// require a bundle; lower stages append the bundle's bare item list if one
/// is given.
Prompt build_prompt(const TaskSpec& spec, AblationStage stage, const ContextBundle* context,
                    const TemplateSet& templates = TemplateSet::builtin());

/// All six rungs, Baseline first.
std::vector<Prompt> compose_ablation(const TaskSpec& spec, const ContextBundle& context,
                                     const TemplateSet& templates = TemplateSet::builtin());

}  // namespace taco
