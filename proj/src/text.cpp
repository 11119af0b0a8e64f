#include "apikg/text.hpp"

#include <cctype>

namespace apikg {

namespace {

bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> tokenize_identifier(std::string_view name) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) tokens.push_back(to_lower(current));
        current.clear();
    };
    for (std::size_t i = 0; i < name.size(); ++i) {
        char c = name[i];
        if (!is_alnum(c)) {
            flush();
            continue;
        }
        if (!current.empty() && is_upper(c)) {
            char prev = current.back();
            bool next_lower = i + 1 < name.size() && is_lower(name[i + 1]);
            if (is_lower(prev) || is_digit(prev) || (is_upper(prev) && next_lower)) flush();
        }
        current.push_back(c);
    }
    flush();
    return tokens;
}

std::string first_sentence(std::string_view description) {
    int depth = 0;
    for (std::size_t i = 0; i < description.size(); ++i) {
        char c = description[i];
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            if (depth > 0) --depth;
        } else if ((c == '.' || c == '!' || c == '?') && depth == 0) {
            if (i + 1 == description.size() || is_space(description[i + 1])) {
                return trim(description.substr(0, i));
            }
        }
    }
    return trim(description);
}

std::vector<std::vector<std::string>> split_clauses(std::string_view text) {
    std::vector<std::vector<std::string>> clauses(1);
    std::string word;
    auto flush_word = [&] {
        if (!word.empty()) clauses.back().push_back(to_lower(word));
        word.clear();
    };
    for (char c : text) {
        if (is_alnum(c) || c == '_') {
            word.push_back(c);
        } else if (is_space(c)) {
            flush_word();
        } else {
            flush_word();
            if (!clauses.back().empty()) clauses.emplace_back();
        }
    }
    flush_word();
    if (clauses.back().empty()) clauses.pop_back();
    return clauses;
}

std::string join(const std::vector<std::string>& tokens, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) out.append(sep);
        out.append(tokens[i]);
    }
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::string short_type_name(std::string_view type) {
    auto generic = type.find('<');
    if (generic != std::string_view::npos) type = type.substr(0, generic);
    while (type.size() >= 2 && type.substr(type.size() - 2) == "[]") type.remove_suffix(2);
    auto cut = type.find_last_of(".$");
    return std::string(cut == std::string_view::npos ? type : type.substr(cut + 1));
}

std::string method_simple_name(std::string_view qualified) {
    auto paren = qualified.find('(');
    if (paren != std::string_view::npos) qualified = qualified.substr(0, paren);
    return last_segment(qualified);
}

std::string last_segment(std::string_view qualified) {
    auto cut = qualified.rfind('.');
    return std::string(cut == std::string_view::npos ? qualified : qualified.substr(cut + 1));
}

}  // namespace apikg
