#include "taco/text.hpp"

#include "taco/error.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

namespace taco {
namespace {

bool is_token_char(UChar32 c) {
    if (c < 0x80) return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    return u_hasBinaryProperty(c, UCHAR_ALPHABETIC) || u_isdigit(c);
}

void append_utf8(std::string& out, UChar32 c) {
    char buf[U8_MAX_LENGTH];
    int32_t len = 0;
    UBool error = false;
    U8_APPEND(reinterpret_cast<uint8_t*>(buf), len, U8_MAX_LENGTH, c, error);
    if (!error) out.append(buf, static_cast<std::size_t>(len));
}

// Decodes one code point at byte `i`, advancing it. Ill-formed bytes decode
// to a negative value and consume one byte.
UChar32 next_code_point(std::string_view s, int32_t& i) {
    UChar32 c = 0;
    U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), i, static_cast<int32_t>(s.size()), c);
    return c;
}

}  // namespace

TokenizationPolicy TokenizationPolicy::from_name(std::string_view name) {
    if (name == "alnum-lower-v1") return TokenizationPolicy{true};
    if (name == "alnum-v1") return TokenizationPolicy{false};
    throw validation_error("UNKNOWN_POLICY", "unknown tokenization policy: " + std::string(name));
}

std::vector<Token> tokenize(std::string_view text, const TokenizationPolicy& policy) {
    std::vector<Token> tokens;
    int32_t i = 0;
    const auto n = static_cast<int32_t>(text.size());
    Token current;
    bool in_token = false;
    while (i < n) {
        const int32_t start = i;
        const UChar32 c = next_code_point(text, i);
        if (c >= 0 && is_token_char(c)) {
            if (!in_token) {
                current = Token{{}, static_cast<std::uint32_t>(start), 0};
                in_token = true;
            }
            if (c < 0x80) {
                current.text.push_back(static_cast<char>(policy.lowercase && c >= 'A' && c <= 'Z' ? c + 32 : c));
            } else {
                append_utf8(current.text, policy.lowercase ? u_tolower(c) : c);
            }
            current.end = static_cast<std::uint32_t>(i);
        } else if (in_token) {
            tokens.push_back(std::move(current));
            in_token = false;
        }
    }
    if (in_token) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<std::string> token_strings(std::string_view text, const TokenizationPolicy& policy) {
    std::vector<std::string> out;
    for (auto& t : tokenize(text, policy)) out.push_back(std::move(t.text));
    return out;
}

bool is_valid_utf8(std::string_view text) {
    int32_t i = 0;
    const auto n = static_cast<int32_t>(text.size());
    while (i < n) {
        if (next_code_point(text, i) < 0) return false;
    }
    return true;
}

std::string clean_text(std::string_view text) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");
    const icu::UnicodeString source = icu::UnicodeString::fromUTF8(
        icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
    icu::UnicodeString normalized = nfc->normalize(source, status);
    if (U_FAILURE(status)) throw std::runtime_error("NFC normalization failed");
    std::string utf8;
    normalized.toUTF8String(utf8);

    std::string out;
    out.reserve(utf8.size());
    bool pending_space = false;
    int32_t i = 0;
    const auto n = static_cast<int32_t>(utf8.size());
    while (i < n) {
        const int32_t start = i;
        const UChar32 c = next_code_point(utf8, i);
        if (c < 0) continue;
        if (u_isUWhiteSpace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (u_iscntrl(c)) continue;  // C0, C1 and DEL
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.append(utf8, static_cast<std::size_t>(start), static_cast<std::size_t>(i - start));
    }
    return out;
}

std::size_t count_code_points(std::string_view text) {
    std::size_t count = 0;
    for (unsigned char ch : text) {
        if ((ch & 0xC0) != 0x80) ++count;
    }
    return count;
}

std::size_t step_back_code_points(std::string_view text, std::size_t pos, std::size_t n) {
    while (n > 0 && pos > 0) {
        --pos;
        while (pos > 0 && (static_cast<unsigned char>(text[pos]) & 0xC0) == 0x80) --pos;
        --n;
    }
    return pos;
}

std::size_t step_forward_code_points(std::string_view text, std::size_t pos, std::size_t n) {
    while (n > 0 && pos < text.size()) {
        ++pos;
        while (pos < text.size() && (static_cast<unsigned char>(text[pos]) & 0xC0) == 0x80) ++pos;
        --n;
    }
    return pos;
}

std::string to_lower(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    int32_t i = 0;
    const auto n = static_cast<int32_t>(text.size());
    while (i < n) {
        const UChar32 c = next_code_point(text, i);
        if (c >= 0) append_utf8(out, u_tolower(c));
    }
    return out;
}

std::string straighten_quotes(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    int32_t i = 0;
    const auto n = static_cast<int32_t>(text.size());
    while (i < n) {
        const int32_t start = i;
        const UChar32 c = next_code_point(text, i);
        switch (c) {
            case 0x201C: case 0x201D: case 0x201E: case 0x201F: case 0x00AB: case 0x00BB:
                out.push_back('"');
                break;
            case 0x2018: case 0x2019: case 0x201A: case 0x201B:
                out.push_back('\'');
                break;
            default:
                out.append(text.substr(static_cast<std::size_t>(start), static_cast<std::size_t>(i - start)));
        }
    }
    return out;
}

std::string_view trim(std::string_view text) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
    while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
    while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
    return text;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        auto line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = nl + 1;
    }
    return lines;
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.emplace_back(text.substr(start));
            return parts;
        }
        parts.emplace_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.append(sep);
        out.append(parts[i]);
    }
    return out;
}

std::u32string to_u32(std::string_view utf8) {
    std::u32string out;
    out.reserve(utf8.size());
    int32_t i = 0;
    const auto n = static_cast<int32_t>(utf8.size());
    while (i < n) {
        const UChar32 c = next_code_point(utf8, i);
        out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
    }
    return out;
}

std::string from_u32(std::u32string_view cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t c : cps) append_utf8(out, static_cast<UChar32>(c));
    return out;
}

}  // namespace taco
