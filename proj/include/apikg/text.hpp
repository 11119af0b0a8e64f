#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace apikg {

std::string to_lower(std::string_view s);

/// Splits an identifier at underscores, non-alphanumerics, lower->upper and
/// upper->(upper followed by lower) boundaries. Digits stay with the token
/// before them. Tokens are lowercased.
std::vector<std::string> tokenize_identifier(std::string_view name);

/// Text up to (excluding) the first '.', '!' or '?' that is followed by
/// whitespace or end of text and is not inside parentheses. The whole text,
/// trimmed, when there is no such terminator.
std::string first_sentence(std::string_view description);

/// Lowercased alphanumeric words grouped into clauses. Any punctuation other
/// than '_' ends the current clause.
std::vector<std::vector<std::string>> split_clauses(std::string_view text);

std::string join(const std::vector<std::string>& tokens, std::string_view sep = " ");

std::string trim(std::string_view s);

// Simple-name helpers for the qualified names produced by doc ingestion.
/// "java.util.List<java.lang.String>[]" -> "List"
std::string short_type_name(std::string_view type);
/// "a.b.C.get(int,java.lang.String)" -> "get"
std::string method_simple_name(std::string_view qualified);
/// Part after the last '.', e.g. parameter "...(int).srcFile" -> "srcFile"
std::string last_segment(std::string_view qualified);

}  // namespace apikg
