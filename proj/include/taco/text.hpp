#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace taco {

/// A token and its byte span in the (cleaned) document text.
struct Token {
    std::string text;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;

    bool operator==(const Token&) const = default;
};

/// Tokenization policy. The only shipped policy treats maximal runs of
/// Unicode alphabetic characters or digits as tokens; everything else,
/// hyphen and apostrophe included, separates.
struct TokenizationPolicy {
    bool lowercase = true;

    std::string name() const { return lowercase ? "alnum-lower-v1" : "alnum-v1"; }
    static TokenizationPolicy from_name(std::string_view name);

    bool operator==(const TokenizationPolicy&) const = default;
};

std::vector<Token> tokenize(std::string_view text, const TokenizationPolicy& policy = {});

/// Tokens only, without offsets.
std::vector<std::string> token_strings(std::string_view text, const TokenizationPolicy& policy = {});

bool is_valid_utf8(std::string_view text);

/// NFC normalization, C0/C1 control removal, whitespace runs collapsed to a
/// single space, leading and trailing whitespace trimmed.
std::string clean_text(std::string_view text);

/// Number of Unicode code points (input assumed valid UTF-8).
std::size_t count_code_points(std::string_view text);

/// Byte offset reached by walking `n` code points backward from `pos`.
std::size_t step_back_code_points(std::string_view text, std::size_t pos, std::size_t n);
/// Byte offset reached by walking `n` code points forward from `pos`.
std::size_t step_forward_code_points(std::string_view text, std::size_t pos, std::size_t n);

/// Simple per-code-point lowercase mapping.
std::string to_lower(std::string_view text);

/// Replaces curly double and single quotes with their ASCII forms.
std::string straighten_quotes(std::string_view text);

std::string_view trim(std::string_view text);

std::vector<std::string_view> split_lines(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::u32string to_u32(std::string_view utf8);
std::string from_u32(std::u32string_view cps);

}  // namespace taco
