#include <gtest/gtest.h>

#include <sstream>

#include "apikg/error.hpp"
#include "apikg/lexicon.hpp"
#include "fixtures.hpp"

using namespace apikg;

namespace {

Lexicons parse_lexicons(const std::string& verbs, const std::string& patterns, const std::string& stops = "",
                        const std::string& pos = "") {
    std::istringstream v(verbs), p(patterns), s(stops), o(pos);
    return Lexicons::parse(v, p, s, o);
}

const std::string kMinimalVerbs = "get\tget\nconvert\tconvert\ncheck\tcheck\n";
const std::string kMinimalPatterns = "V\nV {patient}\n";

}  // namespace

TEST(PhrasePattern, ParsesSlotsAndLiterals) {
    auto p = PhrasePattern::parse("V {patient} from {source} to {goal}");
    EXPECT_EQ(p.slot_count(), 3u);
    ASSERT_EQ(p.elements.size(), 5u);
    EXPECT_TRUE(p.elements[0].is_slot);
    EXPECT_EQ(p.elements[1].literal, (std::vector<std::string>{"from"}));
    EXPECT_EQ(p.elements[4].role, Role::goal);
    EXPECT_EQ(PhrasePattern::parse("V").slot_count(), 0u);
}

TEST(PhrasePattern, RejectsMalformedTemplates) {
    for (const char* bad : {"{patient}", "V {patient} {goal}", "V {patient} in", "V {agent}", "V {patient"}) {
        EXPECT_THROW(PhrasePattern::parse(bad), Error) << bad;
    }
}

TEST(Lexicons, ShippedFilesLoad) {
    const auto& lex = fixtures::shipped_lexicons();
    EXPECT_EQ(lex.verbs().category_of("return"), "get");
    EXPECT_EQ(lex.verbs().category_of("get"), "get");
    EXPECT_TRUE(lex.is_stop_word("the"));
    EXPECT_GE(lex.patterns().patterns.size(), 5u);
    for (const auto& v : lex.verbs().verb_to_category) {
        EXPECT_TRUE(lex.verbs().categories().contains(v.second));
    }
}

TEST(Lexicons, RequiredEntries) {
    EXPECT_NO_THROW(parse_lexicons(kMinimalVerbs, kMinimalPatterns));
    EXPECT_THROW(parse_lexicons("get\tget\n", kMinimalPatterns), Error);
    EXPECT_THROW(parse_lexicons(kMinimalVerbs, "V\n"), Error);
    EXPECT_THROW(parse_lexicons(kMinimalVerbs + "get\tadd\n", kMinimalPatterns), Error);
    EXPECT_THROW(parse_lexicons(kMinimalVerbs, kMinimalPatterns + "V\n"), Error);
    EXPECT_THROW(parse_lexicons(kMinimalVerbs, kMinimalPatterns, "", "word\tx\n"), Error);
}

TEST(Lexicons, MissingDirectoryIsIoError) {
    try {
        Lexicons::load("/nonexistent/lexicons");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::io);
    }
}

TEST(Lemmatize, RulesWithShippedLexicon) {
    const auto& lex = fixtures::shipped_lexicons();
    EXPECT_EQ(lex.lemmatize("returns"), "return");
    EXPECT_EQ(lex.lemmatize("elements"), "element");
    EXPECT_EQ(lex.lemmatize("files"), "file");
    EXPECT_EQ(lex.lemmatize("entries"), "entry");
    EXPECT_EQ(lex.lemmatize("classes"), "class");
    EXPECT_EQ(lex.lemmatize("is"), "be");
    EXPECT_EQ(lex.lemmatize("has"), "have");
    EXPECT_EQ(lex.lemmatize("status"), "status");
    EXPECT_EQ(lex.lemmatize("parsing"), "parse");
    EXPECT_EQ(lex.lemmatize("mapped"), "map");
    EXPECT_EQ(lex.lemmatize("json"), "json");
}

TEST(Lemmatize, IsIdempotentOnShippedVocabulary) {
    const auto& lex = fixtures::shipped_lexicons();
    for (const auto& [verb, cat] : lex.verbs().verb_to_category) {
        EXPECT_EQ(lex.lemmatize(lex.lemmatize(verb)), lex.lemmatize(verb)) << verb;
    }
}
