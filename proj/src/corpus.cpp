#include "apikg/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "apikg/error.hpp"
#include "apikg/text.hpp"
#include "json.hpp"

namespace apikg {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
    throw Error(ErrorCategory::schema, path + ": " + msg);
}

const json& require(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) schema_error(path + "." + key, "missing required field");
    return *it;
}

std::string require_string(const json& obj, const std::string& path, const char* key) {
    const auto& v = require(obj, path, key);
    if (!v.is_string()) schema_error(path + "." + key, "expected string");
    auto s = v.get<std::string>();
    if (trim(s).empty()) schema_error(path + "." + key, "must be non-empty");
    return s;
}

std::optional<std::string> optional_string(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) schema_error(path + "." + key, "expected string");
    auto s = trim(it->get<std::string>());
    if (s.empty()) return std::nullopt;
    return s;
}

const json* optional_array(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return nullptr;
    if (!it->is_array()) schema_error(path + "." + key, "expected array");
    return &*it;
}

void require_object(const json& v, const std::string& path) {
    if (!v.is_object()) schema_error(path, "expected object");
}

std::string at(const std::string& path, const char* key, std::size_t i) {
    return path + "." + key + "[" + std::to_string(i) + "]";
}

MethodDoc parse_method(const json& j, const std::string& path) {
    require_object(j, path);
    MethodDoc m;
    m.name = require_string(j, path, "name");
    m.return_type = require_string(j, path, "return_type");
    m.description = optional_string(j, path, "description");
    m.return_description = optional_string(j, path, "return_description");
    std::set<std::string> names;
    if (const auto* params = optional_array(j, path, "params")) {
        for (std::size_t i = 0; i < params->size(); ++i) {
            auto p_path = at(path, "params", i);
            const auto& pj = (*params)[i];
            require_object(pj, p_path);
            ParamDoc p{require_string(pj, p_path, "name"), require_string(pj, p_path, "type"),
                       optional_string(pj, p_path, "description")};
            if (!names.insert(p.name).second) schema_error(p_path + ".name", "duplicate parameter name '" + p.name + "'");
            m.params.push_back(std::move(p));
        }
    }
    return m;
}

ClassDoc parse_class(const json& j, const std::string& path, const std::string& package) {
    require_object(j, path);
    ClassDoc c;
    c.qualified_name = require_string(j, path, "qualified_name");
    if (c.qualified_name.rfind(package + ".", 0) != 0) {
        schema_error(path + ".qualified_name", "'" + c.qualified_name + "' is not inside package '" + package + "'");
    }
    if (auto it = j.find("is_interface"); it != j.end() && !it->is_null()) {
        if (!it->is_boolean()) schema_error(path + ".is_interface", "expected boolean");
        c.is_interface = it->get<bool>();
    }
    c.extends = optional_string(j, path, "extends");
    c.description = optional_string(j, path, "description");
    if (const auto* impls = optional_array(j, path, "implements")) {
        for (std::size_t i = 0; i < impls->size(); ++i) {
            if (!(*impls)[i].is_string()) schema_error(at(path, "implements", i), "expected string");
            c.implements.push_back((*impls)[i].get<std::string>());
        }
    }
    if (const auto* fields = optional_array(j, path, "fields")) {
        for (std::size_t i = 0; i < fields->size(); ++i) {
            auto f_path = at(path, "fields", i);
            const auto& fj = (*fields)[i];
            require_object(fj, f_path);
            c.fields.push_back({require_string(fj, f_path, "name"), require_string(fj, f_path, "type"),
                                optional_string(fj, f_path, "description")});
        }
    }
    if (const auto* methods = optional_array(j, path, "methods")) {
        for (std::size_t i = 0; i < methods->size(); ++i) {
            c.methods.push_back(parse_method((*methods)[i], at(path, "methods", i)));
        }
    }
    return c;
}

// Adds structural entities and triples for one corpus, tracking the types it defines.
class SkeletonBuilder {
public:
    SkeletonBuilder(KnowledgeGraph& kg, DescriptionTable& descriptions) : kg_(kg), descriptions_(descriptions) {}

    void run(const DocCorpus& corpus) {
        // Register every type first so references resolve regardless of order.
        for (const auto& lib : corpus.libraries) {
            auto lib_id = kg_.add_entity(EntityKind::Library, lib.coordinates);
            for (const auto& pkg : lib.packages) {
                auto pkg_id = kg_.add_entity(EntityKind::Package, pkg.name, lib_id);
                kg_.add_triple(pkg_id, RelationKind::BelongsToLibrary, lib_id);
                for (const auto& cls : pkg.classes) {
                    auto kind = cls.is_interface ? EntityKind::Interface : EntityKind::Class;
                    auto cls_id = kg_.add_entity(kind, cls.qualified_name, lib_id);
                    kg_.add_triple(cls_id, RelationKind::BelongsToPackage, pkg_id);
                    describe(cls_id, cls.description);
                }
            }
        }
        for (const auto& lib : corpus.libraries) {
            auto lib_id = *kg_.find(EntityKind::Library, lib.coordinates);
            for (const auto& pkg : lib.packages) {
                for (const auto& cls : pkg.classes) add_members(lib_id, cls);
            }
        }
    }

private:
    void describe(EntityId id, const std::optional<std::string>& text) {
        if (text) descriptions_[id] = *text;
    }

    EntityId external_library() {
        if (!external_) external_ = kg_.add_entity(EntityKind::Library, kExternalLibrary);
        return *external_;
    }

    // Defined types win over placeholders; unknown names become external Class placeholders.
    EntityId resolve_type(const std::string& name) {
        std::optional<EntityId> placeholder;
        for (auto kind : {EntityKind::Class, EntityKind::Interface}) {
            for (auto id : kg_.find_all(kind, name)) {
                const auto& lib = kg_.entity(*kg_.entity(id).library);
                if (lib.name != kExternalLibrary) return id;
                if (!placeholder) placeholder = id;
            }
        }
        if (placeholder) return *placeholder;
        return kg_.add_entity(EntityKind::Class, name, external_library());
    }

    void add_members(EntityId lib_id, const ClassDoc& cls) {
        auto kind = cls.is_interface ? EntityKind::Interface : EntityKind::Class;
        auto cls_id = *kg_.find(kind, cls.qualified_name, lib_id);
        if (cls.extends) kg_.add_triple(cls_id, RelationKind::Extend, resolve_type(*cls.extends));
        for (const auto& iface : cls.implements) {
            // Interfaces extend other interfaces; classes implement them.
            auto rel = cls.is_interface ? RelationKind::Extend : RelationKind::Implement;
            kg_.add_triple(cls_id, rel, resolve_type(iface));
        }
        for (const auto& f : cls.fields) {
            auto f_id = kg_.add_entity(EntityKind::Field, cls.qualified_name + "." + f.name, lib_id);
            kg_.add_triple(cls_id, RelationKind::HasField, f_id);
            describe(f_id, f.description);
        }
        for (const auto& m : cls.methods) add_method(lib_id, cls_id, cls, m);
    }

    void add_method(EntityId lib_id, EntityId cls_id, const ClassDoc& cls, const MethodDoc& m) {
        auto name = method_qualified_name(cls, m);
        auto m_id = kg_.add_entity(EntityKind::Method, name, lib_id);
        kg_.add_triple(cls_id, RelationKind::HasMethod, m_id);
        describe(m_id, m.description);
        for (const auto& p : m.params) {
            auto p_id = kg_.add_entity(EntityKind::Parameter, name + "." + p.name, lib_id);
            auto type_id = resolve_type(p.type);
            kg_.add_triple(m_id, RelationKind::HasParameter, p_id);
            kg_.add_triple(p_id, RelationKind::HasParameterType, type_id);
            kg_.add_triple(m_id, RelationKind::HasParameterType, type_id);
            auto abstract_id = kg_.add_entity(EntityKind::AbstractParameter, p.name + ":" + p.type);
            kg_.add_triple(p_id, RelationKind::InstanceOfAbstractParameter, abstract_id);
            describe(p_id, p.description);
        }
        auto r_id = kg_.add_entity(EntityKind::ReturnValue, name + ".<R>", lib_id);
        kg_.add_triple(m_id, RelationKind::HasReturnValue, r_id);
        if (m.return_type != "void") {
            auto type_id = resolve_type(m.return_type);
            kg_.add_triple(r_id, RelationKind::HasReturnValueType, type_id);
            kg_.add_triple(m_id, RelationKind::HasReturnValueType, type_id);
        }
        describe(r_id, m.return_description);
    }

    KnowledgeGraph& kg_;
    DescriptionTable& descriptions_;
    std::optional<EntityId> external_;
};

}  // namespace

DocCorpus parse_corpus(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCategory::parse, std::string("corpus is not valid JSON: ") + e.what());
    }
    const std::string path = "$";
    require_object(root, path);
    const auto& libs = require(root, path, "libraries");
    if (!libs.is_array()) schema_error("$.libraries", "expected array");

    DocCorpus corpus;
    std::set<std::string> coordinates;
    for (std::size_t li = 0; li < libs.size(); ++li) {
        auto l_path = at(path, "libraries", li);
        const auto& lj = libs[li];
        require_object(lj, l_path);
        LibraryDoc lib;
        lib.coordinates = require_string(lj, l_path, "coordinates");
        if (lib.coordinates == kExternalLibrary) {
            schema_error(l_path + ".coordinates", "'external' is reserved for placeholder types");
        }
        if (!coordinates.insert(lib.coordinates).second) {
            schema_error(l_path + ".coordinates", "duplicate library '" + lib.coordinates + "'");
        }
        const auto& pkgs = require(lj, l_path, "packages");
        if (!pkgs.is_array()) schema_error(l_path + ".packages", "expected array");
        std::set<std::string> package_names;
        for (std::size_t pi = 0; pi < pkgs.size(); ++pi) {
            auto p_path = at(l_path, "packages", pi);
            const auto& pj = pkgs[pi];
            require_object(pj, p_path);
            PackageDoc pkg;
            pkg.name = require_string(pj, p_path, "name");
            if (!package_names.insert(pkg.name).second) {
                schema_error(p_path + ".name", "duplicate package '" + pkg.name + "' in library '" + lib.coordinates + "'");
            }
            const auto& classes = require(pj, p_path, "classes");
            if (!classes.is_array()) schema_error(p_path + ".classes", "expected array");
            for (std::size_t ci = 0; ci < classes.size(); ++ci) {
                pkg.classes.push_back(parse_class(classes[ci], at(p_path, "classes", ci), pkg.name));
            }
            lib.packages.push_back(std::move(pkg));
        }
        corpus.libraries.push_back(std::move(lib));
    }
    return corpus;
}

DocCorpus load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCategory::io, "cannot open corpus file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_corpus(buf.str());
}

std::size_t ConstructionReport::total_entities() const {
    std::size_t n = 0;
    for (auto c : entities_added) n += c;
    return n;
}

std::size_t ConstructionReport::total_triples() const {
    std::size_t n = 0;
    for (auto c : triples_added) n += c;
    return n;
}

std::string method_qualified_name(const ClassDoc& cls, const MethodDoc& method) {
    std::string name = cls.qualified_name + "." + method.name + "(";
    for (std::size_t i = 0; i < method.params.size(); ++i) {
        if (i > 0) name += ",";
        name += method.params[i].type;
    }
    return name + ")";
}

ConstructionReport build_skeleton(const DocCorpus& corpus, KnowledgeGraph& kg, DescriptionTable& descriptions) {
    auto entities_before = kg.stats();
    auto triples_before = kg.relation_stats();
    SkeletonBuilder(kg, descriptions).run(corpus);
    ConstructionReport report;
    auto entities_after = kg.stats();
    auto triples_after = kg.relation_stats();
    for (std::size_t i = 0; i < kEntityKindCount; ++i) report.entities_added[i] = entities_after[i] - entities_before[i];
    for (std::size_t i = 0; i < kRelationKindCount; ++i) report.triples_added[i] = triples_after[i] - triples_before[i];
    return report;
}

}  // namespace apikg
