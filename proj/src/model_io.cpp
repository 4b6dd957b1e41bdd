#include "voi/model_io.hpp"

#include "voi/error.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace voi {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorCode::invalid_model, "model file: " + what);
}

void allow_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> keys) {
    if (!obj.is_object()) fail(std::string(where) + " must be an object");
    for (const auto& item : obj.items()) {
        if (std::find(keys.begin(), keys.end(), item.key()) == keys.end())
            fail("unknown key '" + item.key() + "' in " + std::string(where));
    }
}

const json& required(const json& obj, std::string_view where, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail("missing key '" + std::string(key) + "' in " + std::string(where));
    return *it;
}

double number(const json& j, const std::string& what) {
    if (!j.is_number()) fail(what + " must be a number");
    return j.get<double>();
}

std::string text(const json& j, const std::string& what) {
    if (!j.is_string()) fail(what + " must be a string");
    return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& what) {
    if (!j.is_array()) fail(what + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(number(x, what + " entry"));
    return out;
}

std::vector<std::string> strings(const json& j, const std::string& what) {
    if (!j.is_array()) fail(what + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& x : j) out.push_back(text(x, what + " entry"));
    return out;
}

} // namespace

DiagnosisModel read_model(std::string_view input) {
    json doc;
    try {
        doc = json::parse(input);
    } catch (const json::parse_error& e) {
        fail(std::string("parse error: ") + e.what());
    }
    allow_keys(doc, "model", {"schema_version", "prior", "utility", "evidence", "groups", "set_costs"});

    const auto& version = required(doc, "model", "schema_version");
    if (!version.is_number_integer() || version.get<int>() != kModelSchemaVersion)
        fail("unsupported schema_version (expected " + std::to_string(kModelSchemaVersion) + ")");

    DiagnosisModel model;
    model.prior = number(required(doc, "model", "prior"), "prior");

    const auto& u = required(doc, "model", "utility");
    allow_keys(u, "utility", {"h_d", "h_not_d", "not_h_d", "not_h_not_d", "risk", "risk_tolerance"});
    model.utility.value_h_d = number(required(u, "utility", "h_d"), "utility.h_d");
    model.utility.value_h_not_d = number(required(u, "utility", "h_not_d"), "utility.h_not_d");
    model.utility.value_not_h_d = number(required(u, "utility", "not_h_d"), "utility.not_h_d");
    model.utility.value_not_h_not_d = number(required(u, "utility", "not_h_not_d"), "utility.not_h_not_d");
    const std::string risk = u.contains("risk") ? text(u["risk"], "utility.risk") : "linear";
    if (risk == "linear") {
        if (u.contains("risk_tolerance")) fail("risk_tolerance is only meaningful for exponential risk");
        model.utility.risk = RiskModel::linear();
    } else if (risk == "exponential") {
        model.utility.risk =
            RiskModel::exponential(number(required(u, "utility", "risk_tolerance"), "utility.risk_tolerance"));
    } else {
        fail("utility.risk must be \"linear\" or \"exponential\"");
    }

    const auto& evidence = required(doc, "model", "evidence");
    if (!evidence.is_array()) fail("evidence must be an array");
    for (const auto& e : evidence) {
        allow_keys(e, "evidence entry", {"id", "outcomes", "p_given_h", "p_given_not_h", "cost"});
        EvidenceVariable v;
        v.id = text(required(e, "evidence entry", "id"), "evidence id");
        v.outcomes = strings(required(e, "evidence entry", "outcomes"), "outcomes of '" + v.id + "'");
        v.likelihood_h = numbers(required(e, "evidence entry", "p_given_h"), "p_given_h of '" + v.id + "'");
        v.likelihood_not_h =
            numbers(required(e, "evidence entry", "p_given_not_h"), "p_given_not_h of '" + v.id + "'");
        if (e.contains("cost")) v.cost = number(e["cost"], "cost of '" + v.id + "'");
        model.evidence.push_back(std::move(v));
    }

    if (doc.contains("groups")) {
        const auto& groups = doc["groups"];
        if (!groups.is_array()) fail("groups must be an array");
        for (const auto& g : groups) {
            allow_keys(g, "group", {"members", "joint_given_h", "joint_given_not_h"});
            EvidenceGroup group;
            group.member_ids = strings(required(g, "group", "members"), "group members");
            group.joint_h = numbers(required(g, "group", "joint_given_h"), "joint_given_h");
            group.joint_not_h = numbers(required(g, "group", "joint_given_not_h"), "joint_given_not_h");
            model.groups.push_back(std::move(group));
        }
    }

    if (doc.contains("set_costs")) {
        const auto& costs = doc["set_costs"];
        if (!costs.is_array()) fail("set_costs must be an array");
        for (const auto& c : costs) {
            allow_keys(c, "set cost", {"members", "cost"});
            model.set_costs.push_back({strings(required(c, "set cost", "members"), "set cost members"),
                                       number(required(c, "set cost", "cost"), "set cost")});
        }
    }
    return model;
}

DiagnosisModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_model(buf.str());
}

std::string write_model(const DiagnosisModel& model) {
    ordered_json doc;
    doc["schema_version"] = kModelSchemaVersion;
    doc["prior"] = model.prior;

    ordered_json u;
    u["h_d"] = model.utility.value_h_d;
    u["h_not_d"] = model.utility.value_h_not_d;
    u["not_h_d"] = model.utility.value_not_h_d;
    u["not_h_not_d"] = model.utility.value_not_h_not_d;
    if (model.utility.risk.kind == RiskModel::Kind::exponential) {
        u["risk"] = "exponential";
        u["risk_tolerance"] = model.utility.risk.tolerance;
    } else {
        u["risk"] = "linear";
    }
    doc["utility"] = std::move(u);

    doc["evidence"] = ordered_json::array();
    for (const auto& v : model.evidence) {
        ordered_json e;
        e["id"] = v.id;
        e["outcomes"] = v.outcomes;
        e["p_given_h"] = v.likelihood_h;
        e["p_given_not_h"] = v.likelihood_not_h;
        e["cost"] = v.cost;
        doc["evidence"].push_back(std::move(e));
    }
    if (!model.groups.empty()) {
        doc["groups"] = ordered_json::array();
        for (const auto& g : model.groups) {
            ordered_json j;
            j["members"] = g.member_ids;
            j["joint_given_h"] = g.joint_h;
            j["joint_given_not_h"] = g.joint_not_h;
            doc["groups"].push_back(std::move(j));
        }
    }
    if (!model.set_costs.empty()) {
        doc["set_costs"] = ordered_json::array();
        for (const auto& c : model.set_costs) {
            ordered_json j;
            j["members"] = c.members;
            j["cost"] = c.cost;
            doc["set_costs"].push_back(std::move(j));
        }
    }
    return doc.dump(2) + "\n";
}

void save_model(const DiagnosisModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::invalid_argument, "cannot write '" + path.string() + "'");
    out << write_model(model);
}

} // namespace voi
