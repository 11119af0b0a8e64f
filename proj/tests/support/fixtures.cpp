#include "fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

namespace apikg::fixtures {

const Lexicons& shipped_lexicons() {
    static const Lexicons lex = Lexicons::load(std::filesystem::path(APIKG_DATA_DIR) / "lexicons");
    return lex;
}

std::filesystem::path fixture_path(const std::string& name) { return std::filesystem::path(APIKG_FIXTURE_DIR) / name; }

std::filesystem::path cli_path() { return APIKG_CLI_PATH; }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

KnowledgeGraph synthetic_isomorphic_kg(std::uint64_t seed) {
    constexpr int kPackages = 2, kClassesPerPackage = 3, kMethodsPerClass = 6;
    constexpr int kConcepts = 40, kExpressions = 24, kVerbs = 8, kCategories = 4, kPatterns = 3, kAbstract = 16;
    std::mt19937_64 rng(seed);
    auto pick = [&](int n) { return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng)); };

    KnowledgeGraph kg;
    std::vector<EntityId> concepts, fes, verbs, cats, patterns, abstracts;
    for (int i = 0; i < kConcepts; ++i) concepts.push_back(kg.add_entity(EntityKind::Concept, "concept " + std::to_string(i)));
    for (int i = 0; i < kCategories; ++i) cats.push_back(kg.add_entity(EntityKind::FunctionalityCategory, "cat" + std::to_string(i)));
    for (int i = 0; i < kVerbs; ++i) {
        verbs.push_back(kg.add_entity(EntityKind::FunctionalityVerb, "verb" + std::to_string(i)));
        kg.add_triple(verbs.back(), RelationKind::InCategory, cats[i % kCategories]);
    }
    for (int i = 0; i < kPatterns; ++i) patterns.push_back(kg.add_entity(EntityKind::PhrasePattern, "pattern" + std::to_string(i)));

    // Each functionality carries a typical signature, as in real API docs where
    // methods doing the same thing take and return the same kinds of values.
    // A method follows its functionality's signature most of the time,
    // and its description mentions the concepts the functionality involves.
    struct Signature {
        int in_type, in_val, out_type, abstract_param, mention;
    };
    std::vector<Signature> signatures;
    for (int i = 0; i < kExpressions; ++i) {
        signatures.push_back({pick(kConcepts), pick(kConcepts), pick(kConcepts), pick(kAbstract), pick(kConcepts)});
    }
    for (int i = 0; i < kExpressions; ++i) {
        fes.push_back(kg.add_entity(EntityKind::FunctionalityExpression, "fe" + std::to_string(i)));
        int v = pick(kVerbs);
        kg.add_triple(fes.back(), RelationKind::HasVerb, verbs[v]);
        kg.add_triple(fes.back(), RelationKind::InCategory, cats[v % kCategories]);
        kg.add_triple(fes.back(), RelationKind::HasPattern, patterns[pick(kPatterns)]);
        kg.add_triple(fes.back(), RelationKind::InvolveConcept, concepts[signatures[i].in_val]);
        kg.add_triple(fes.back(), RelationKind::InvolveConcept, concepts[signatures[i].mention]);
    }
    for (int i = 0; i < kAbstract; ++i) {
        abstracts.push_back(kg.add_entity(EntityKind::AbstractParameter, "p" + std::to_string(i) + ":T"));
        kg.add_triple(abstracts.back(), RelationKind::InstanceParameterOfConcept, concepts[pick(kConcepts)]);
    }
    for (int i = 1; i < kConcepts; i += 3) kg.add_triple(concepts[i], RelationKind::IsA, concepts[i - 1]);

    std::bernoulli_distribution typical(0.8);
    auto or_random = [&](int usual, int n) { return typical(rng) ? usual : pick(n); };

    // One shared draw of every per-method choice, replayed for both libraries.
    struct MethodShape {
        int fe, obj, in_type, in_val, out_type, abstract_param, mention1, mention2;
    };
    std::vector<MethodShape> shapes;
    std::vector<int> class_concepts;
    for (int c = 0; c < kPackages * kClassesPerPackage; ++c) {
        class_concepts.push_back(pick(kConcepts));
        for (int m = 0; m < kMethodsPerClass; ++m) {
            int fe = pick(kExpressions);
            const auto& sig = signatures[fe];
            shapes.push_back({fe, class_concepts.back(), or_random(sig.in_type, kConcepts),
                              or_random(sig.in_val, kConcepts), or_random(sig.out_type, kConcepts),
                              or_random(sig.abstract_param, kAbstract), class_concepts.back(),
                              or_random(sig.mention, kConcepts)});
        }
    }

    for (int lib = 0; lib < 2; ++lib) {
        std::string prefix = lib == 0 ? "alpha" : "beta";
        auto lib_id = kg.add_entity(EntityKind::Library, prefix + ":lib:1");
        int shape = 0;
        for (int p = 0; p < kPackages; ++p) {
            auto pkg = kg.add_entity(EntityKind::Package, prefix + ".p" + std::to_string(p), lib_id);
            kg.add_triple(pkg, RelationKind::BelongsToLibrary, lib_id);
            for (int c = 0; c < kClassesPerPackage; ++c) {
                int class_index = p * kClassesPerPackage + c;
                auto cls = kg.add_entity(EntityKind::Class, prefix + ".p" + std::to_string(p) + ".C" + std::to_string(c), lib_id);
                kg.add_triple(cls, RelationKind::BelongsToPackage, pkg);
                kg.add_triple(cls, RelationKind::InstanceClassOfConcept, concepts[class_concepts[class_index]]);
                for (int m = 0; m < kMethodsPerClass; ++m, ++shape) {
                    const auto& s = shapes[shape];
                    auto method = kg.add_entity(EntityKind::Method, kg.entity(cls).name + ".m" + std::to_string(m) + "()", lib_id);
                    kg.add_triple(cls, RelationKind::HasMethod, method);
                    kg.add_triple(method, RelationKind::HasFunctionality, fes[s.fe]);
                    kg.add_triple(method, RelationKind::OperationOf, concepts[s.obj]);
                    kg.add_triple(method, RelationKind::HasInputType, concepts[s.in_type]);
                    kg.add_triple(method, RelationKind::HasInputValue, concepts[s.in_val]);
                    kg.add_triple(method, RelationKind::HasOutputType, concepts[s.out_type]);
                    kg.add_triple(concepts[s.mention1], RelationKind::MentionedInDescription, method);
                    kg.add_triple(concepts[s.mention2], RelationKind::MentionedInDescription, method);
                    auto param = kg.add_entity(EntityKind::Parameter, kg.entity(method).name + ".x", lib_id);
                    kg.add_triple(method, RelationKind::HasParameter, param);
                    kg.add_triple(param, RelationKind::InstanceOfAbstractParameter, abstracts[s.abstract_param]);
                }
            }
        }
    }
    return kg;
}

DocCorpus four_library_corpus() {
    struct MethodTemplate {
        const char* name;
        const char* ret;
        const char* param_type;
        const char* description;
    };
    const std::array<MethodTemplate, 8> methods = {{
        {"size", "int", nullptr, "Returns the number of elements in this collection."},
        {"add", "boolean", "java.lang.Object", "Adds an element to the end of the collection."},
        {"remove", "boolean", "java.lang.Object", "Removes an element from the collection."},
        {"clear", "void", nullptr, "Removes all elements from the collection."},
        {"contains", "boolean", "java.lang.Object", "Returns true if the collection contains the element."},
        {"toArray", "java.lang.Object[]", nullptr, "Converts the collection to an array."},
        {"get", "java.lang.Object", "int", "Returns the element at the position."},
        {"sort", "void", nullptr, "Sorts the elements in the collection."},
    }};
    const std::array<const char*, 4> libs = {"alpha", "beta", "gamma", "delta"};
    DocCorpus corpus;
    for (const auto* lib : libs) {
        LibraryDoc ld;
        ld.coordinates = std::string("org.") + lib + ":coll:1.0";
        PackageDoc pd;
        pd.name = std::string("org.") + lib;
        for (int c = 0; c < 2; ++c) {
            ClassDoc cd;
            cd.qualified_name = pd.name + (c == 0 ? ".Bag" : ".Sequence");
            cd.description = c == 0 ? "An unordered collection of elements." : "An ordered collection of elements.";
            for (const auto& m : methods) {
                MethodDoc md;
                md.name = m.name;
                md.return_type = m.ret;
                if (m.param_type) md.params.push_back({"item", m.param_type, std::nullopt});
                md.description = m.description;
                cd.methods.push_back(md);
            }
            pd.classes.push_back(cd);
        }
        ld.packages.push_back(pd);
        corpus.libraries.push_back(ld);
    }
    return corpus;
}

KnowledgeGraph random_kg(std::uint64_t seed, std::size_t per_kind) {
    std::mt19937_64 rng(seed);
    KnowledgeGraph kg;
    auto lib = kg.add_entity(EntityKind::Library, "lib:" + std::to_string(seed));
    for (auto kind : kAllEntityKinds) {
        if (kind == EntityKind::Library) continue;
        for (std::size_t i = 0; i < per_kind; ++i) {
            std::string name = std::string(to_string(kind)) + " " + std::to_string(i);
            kg.add_entity(kind, name, is_shared_kind(kind) ? std::nullopt : std::optional<EntityId>(lib));
        }
    }
    for (std::size_t r = 0; r < kRelationKindCount; ++r) {
        auto rel = static_cast<RelationKind>(r);
        const auto& schema = schema_of(rel);
        std::vector<EntityId> heads, tails;
        for (const auto& e : kg.entities()) {
            if (schema.head.contains(e.kind)) heads.push_back(e.id);
            if (schema.tail.contains(e.kind)) tails.push_back(e.id);
        }
        for (int i = 0; i < 4; ++i) {
            auto h = heads[std::uniform_int_distribution<std::size_t>(0, heads.size() - 1)(rng)];
            auto t = tails[std::uniform_int_distribution<std::size_t>(0, tails.size() - 1)(rng)];
            kg.add_triple(h, rel, t);
        }
    }
    return kg;
}

HandEmbedded hand_embedded_fixture() {
    HandEmbedded f;
    auto& kg = f.kg;
    auto la = kg.add_entity(EntityKind::Library, "a:lib:1");
    auto lb = kg.add_entity(EntityKind::Library, "b:lib:1");
    auto ca = kg.add_entity(EntityKind::Class, "a.Source", la);
    auto cb = kg.add_entity(EntityKind::Class, "b.Target", lb);
    auto cbare = kg.add_entity(EntityKind::Class, "b.Bare", lb);
    f.source = kg.add_entity(EntityKind::Method, "a.Source.s(int,int)", la);
    f.candidate = kg.add_entity(EntityKind::Method, "b.Target.e(int)", lb);
    f.bare = kg.add_entity(EntityKind::Method, "b.Bare.run()", lb);
    kg.add_triple(ca, RelationKind::HasMethod, f.source);
    kg.add_triple(cb, RelationKind::HasMethod, f.candidate);
    kg.add_triple(cbare, RelationKind::HasMethod, f.bare);

    auto make_concept = [&](const char* n) { return kg.add_entity(EntityKind::Concept, n); };
    auto obj_s = make_concept("obj s"), obj_e = make_concept("obj e");
    auto it1 = make_concept("type one"), it2 = make_concept("type two"), it_e = make_concept("type e");
    auto iv_s = make_concept("val s"), iv_e = make_concept("val e");
    auto ot_s = make_concept("out s"), ot_e = make_concept("out e");
    auto fe1 = kg.add_entity(EntityKind::FunctionalityExpression, "fe one");
    auto fe2 = kg.add_entity(EntityKind::FunctionalityExpression, "fe two");
    auto fe_e = kg.add_entity(EntityKind::FunctionalityExpression, "fe e");
    auto fe_bare = kg.add_entity(EntityKind::FunctionalityExpression, "fe bare");

    kg.add_triple(f.source, RelationKind::OperationOf, obj_s);
    kg.add_triple(f.source, RelationKind::HasFunctionality, fe1);
    kg.add_triple(f.source, RelationKind::HasFunctionality, fe2);
    kg.add_triple(f.source, RelationKind::HasInputType, it1);
    kg.add_triple(f.source, RelationKind::HasInputType, it2);
    kg.add_triple(f.source, RelationKind::HasInputValue, iv_s);
    kg.add_triple(f.source, RelationKind::HasOutputType, ot_s);
    kg.add_triple(f.candidate, RelationKind::OperationOf, obj_e);
    kg.add_triple(f.candidate, RelationKind::HasFunctionality, fe_e);
    kg.add_triple(f.candidate, RelationKind::HasInputType, it_e);
    kg.add_triple(f.candidate, RelationKind::HasInputValue, iv_e);
    kg.add_triple(f.candidate, RelationKind::HasOutputType, ot_e);
    kg.add_triple(f.bare, RelationKind::HasFunctionality, fe_bare);

    f.model = EmbeddingModel(ModelKind::transe, 2, kg.entity_count());
    auto set = [&](EntityId id, double x, double y) {
        auto row = f.model.entity(id);
        row[0] = x;
        row[1] = y;
    };
    for (const auto& e : kg.entities()) set(e.id, 1.0, 1.0);
    set(f.source, 1.0, 0.0);
    set(f.candidate, 0.6, 0.8);
    set(f.bare, -1.0, 0.5);
    set(obj_s, 1.0, 2.0);
    set(obj_e, 2.0, 1.0);
    set(it1, 1.0, 0.0);
    set(it2, 0.0, 1.0);
    set(it_e, 3.0, 1.0);
    set(iv_s, 0.0, 2.0);
    set(iv_e, 1.0, -1.0);
    set(ot_s, -1.0, 0.0);
    set(ot_e, -1.0, 0.2);
    set(fe1, 1.0, 0.0);
    set(fe2, 0.0, 1.0);
    set(fe_e, 1.0, 3.0);
    set(fe_bare, 2.0, -1.0);
    return f;
}

BuildResult build_fixture(const std::string& name) {
    return build_knowledge_graph(load_corpus(fixture_path(name)), shipped_lexicons());
}

std::set<Triple> triples_of(const KnowledgeGraph& kg, std::initializer_list<RelationKind> rels) {
    std::set<Triple> out;
    for (const auto& t : kg.triples()) {
        for (auto r : rels) {
            if (t.rel == r) out.insert(t);
        }
    }
    return out;
}

namespace {

std::vector<std::string> words_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

bool token_prefix(const std::vector<std::string>& shorter, const std::vector<std::string>& longer) {
    return shorter.size() < longer.size() && std::equal(shorter.begin(), shorter.end(), longer.begin());
}

bool token_suffix(const std::vector<std::string>& shorter, const std::vector<std::string>& longer) {
    return shorter.size() < longer.size() && std::equal(shorter.rbegin(), shorter.rend(), longer.rbegin());
}

bool derived(const std::string& c1, const std::string& c2) {
    if (c2.size() < 3 || c1 == c2) return false;
    for (std::string s : {"er", "or", "r", "ing", "ion", "tion", "ed"}) {
        bool vowel = std::string("aeiou").find(s[0]) != std::string::npos;
        if (c1 == c2 + s) return true;
        if (vowel && c2.back() == 'e' && c1 == c2.substr(0, c2.size() - 1) + s) return true;
        if (vowel && c1 == c2 + c2.back() + s) return true;
    }
    return false;
}

std::string compact(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    return s;
}

}  // namespace

std::set<Triple> concept_relation_oracle(const KnowledgeGraph& kg) {
    auto concepts = kg.entities_of_kind(EntityKind::Concept);
    std::set<Triple> out;
    for (auto a : concepts) {
        const auto& na = kg.entity(a).name;
        auto wa = words_of(na);
        for (auto b : concepts) {
            if (a == b) continue;
            const auto& nb = kg.entity(b).name;
            auto wb = words_of(nb);
            if (derived(na, nb)) out.insert({a, RelationKind::DerivedFrom, b});
            if (compact(na) == compact(nb)) out.insert({a, RelationKind::SameAs, b});
            bool longest_prefix = token_prefix(wb, wa);
            bool longest_suffix = token_suffix(wb, wa);
            for (auto c : concepts) {
                auto wc = words_of(kg.entity(c).name);
                if (wc.size() <= wb.size()) continue;
                if (token_prefix(wc, wa)) longest_prefix = false;
                if (token_suffix(wc, wa)) longest_suffix = false;
            }
            if (longest_prefix) out.insert({a, RelationKind::FacetOf, b});
            if (longest_suffix) out.insert({a, RelationKind::IsA, b});
        }
    }
    return out;
}

std::set<Triple> method_relation_oracle(const KnowledgeGraph& kg) {
    struct Rule {
        RelationKind first;
        RelationKind second;
        RelationKind result;
        bool method_is_head;
    };
    const Rule rules[] = {
        {RelationKind::HasMethod, RelationKind::InstanceClassOfConcept, RelationKind::OperationOf, false},
        {RelationKind::HasParameter, RelationKind::InstanceParameterOfConcept, RelationKind::HasInputValue, true},
        {RelationKind::HasParameterType, RelationKind::InstanceClassOfConcept, RelationKind::HasInputType, true},
        {RelationKind::HasReturnValueType, RelationKind::InstanceClassOfConcept, RelationKind::HasOutputType, true},
    };
    std::set<Triple> out;
    for (const auto& rule : rules) {
        for (const auto& t1 : kg.triples()) {
            if (t1.rel != rule.first) continue;
            auto method = rule.method_is_head ? t1.head : t1.tail;
            auto mid = rule.method_is_head ? t1.tail : t1.head;
            if (kg.entity(method).kind != EntityKind::Method) continue;
            for (const auto& t2 : kg.triples()) {
                if (t2.rel == rule.second && t2.head == mid) out.insert({method, rule.result, t2.tail});
            }
        }
    }
    return out;
}

double gradient_check_error(ModelKind kind, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::size_t width = kind == ModelKind::complex ? 2 * dim : dim;
    std::vector<double> h(width), r(width), t(width);
    for (auto* v : {&h, &r, &t}) {
        for (auto& x : *v) x = uni(rng);
    }
    double label = (rng() & 1) ? 1.0 : -1.0;
    std::vector<double> gh(width, 0.0), gr(width, 0.0), gt(width, 0.0);
    logistic_loss_gradient(kind, h, r, t, label, gh, gr, gt);

    const double step = 1e-5;
    double worst = 0.0;
    std::vector<double>* rows[] = {&h, &r, &t};
    const std::vector<double>* grads[] = {&gh, &gr, &gt};
    for (int which = 0; which < 3; ++which) {
        auto& row = *rows[which];
        double diff2 = 0.0, analytic2 = 0.0, numeric2 = 0.0;
        for (std::size_t k = 0; k < width; ++k) {
            double saved = row[k];
            row[k] = saved + step;
            double up = logistic_loss(kind, h, r, t, label);
            row[k] = saved - step;
            double down = logistic_loss(kind, h, r, t, label);
            row[k] = saved;
            double numeric = (up - down) / (2 * step);
            double analytic = (*grads[which])[k];
            diff2 += (numeric - analytic) * (numeric - analytic);
            analytic2 += analytic * analytic;
            numeric2 += numeric * numeric;
        }
        double scale = std::max(std::sqrt(analytic2), std::sqrt(numeric2));
        if (scale > 0.0) worst = std::max(worst, std::sqrt(diff2) / scale);
    }
    return worst;
}

int run_command(const std::string& command, std::string& out) {
    out.clear();
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return -1;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int status = pclose(pipe);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace apikg::fixtures
