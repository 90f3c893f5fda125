#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "usertype/model_io.hpp"

namespace usertype {

namespace {

using nlohmann::json;  // std::map keys: serialization order is canonical

constexpr const char* kFormatName = "usertype-model";

std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int bit = 0; bit < 8; ++bit) c = (c & 1u) ? 0xedb88320u ^ (c >> 1) : c >> 1;
        table[i] = c;
    }
    return table;
}

// --- encoding --------------------------------------------------------------

json encode_schema(const FeatureSchema& schema) {
    json groups = json::array();
    for (FeatureGroup g : schema.groups) groups.push_back(to_string(g));
    return {{"groups", std::move(groups)}, {"lexicon_categories", schema.lexicon_categories}};
}

json encode_preprocessor(const Preprocessor& pre) {
    return {{"schema", encode_schema(pre.schema)},
            {"mode", to_string(pre.mode)},
            {"image_impute", pre.image_impute},
            {"mean", pre.mean},
            {"spread", pre.spread}};
}

json encode_config(const ClassifierConfig& config) {
    return {{"algorithm", to_string(config.algorithm)},
            {"seed", config.seed},
            {"forest",
             {{"trees", config.forest.trees},
              {"features_per_split", config.forest.features_per_split},
              {"bootstrap", config.forest.bootstrap},
              {"max_depth", config.forest.max_depth},
              {"min_leaf", config.forest.min_leaf}}},
            {"svm", {{"lambda", config.svm.lambda}, {"epochs", config.svm.epochs}}},
            {"logistic",
             {{"lambda", config.logistic.lambda},
              {"iterations", config.logistic.iterations},
              {"step", config.logistic.step}}},
            {"nb", {{"smoothing_ratio", config.nb.smoothing_ratio}}}};
}

json encode_tree(const Tree& tree) {
    json nodes = json::array();
    for (const TreeNode& n : tree.nodes)
        nodes.push_back({n.feature, n.threshold, n.left, n.right, n.label});
    return nodes;
}

struct ParamsEncoder {
    json operator()(const ForestModel& m) const {
        json trees = json::array();
        for (const Tree& t : m.trees) trees.push_back(encode_tree(t));
        return {{"kind", "random_forest"}, {"trees", std::move(trees)}};
    }
    json operator()(const LinearOvrModel& m) const {
        return {{"kind", "linear_svm_ovr"}, {"weights", m.weights}, {"bias", m.bias}};
    }
    json operator()(const LogisticModel& m) const {
        return {{"kind", "logistic_regression"}, {"weights", m.weights}, {"bias", m.bias}};
    }
    json operator()(const GaussianNbModel& m) const {
        return {{"kind", "gaussian_nb"},
                {"log_prior", m.log_prior},
                {"mean", m.mean},
                {"variance", m.variance}};
    }
    json operator()(const MajorityModel& m) const {
        return {{"kind", "majority"}, {"label", to_string(m.label)}, {"shares", m.shares}};
    }
};

json encode_payload(const TrainedModel& model) {
    json class_order = json::array();
    for (UserType t : kClassOrder) class_order.push_back(to_string(t));
    return {{"class_order", std::move(class_order)},
            {"config", encode_config(model.config)},
            {"name_options",
             {{"theta", model.name_options.theta},
              {"strategy", to_string(model.name_options.strategy)}}},
            {"preprocessor", encode_preprocessor(model.preprocessor)},
            {"classifier", std::visit(ParamsEncoder{}, model.params)}};
}

// --- decoding --------------------------------------------------------------

[[noreturn]] void fail_corrupt(const std::string& detail) {
    throw ModelIoError(ModelIoError::Kind::corrupt, "corrupt model artifact: " + detail);
}

FeatureSchema decode_schema(const json& j) {
    FeatureSchema schema;
    for (const json& g : j.at("groups"))
        schema.groups.push_back(feature_group_from_string(g.get<std::string>()));
    schema.lexicon_categories = j.at("lexicon_categories").get<std::size_t>();
    return schema;
}

Preprocessor decode_preprocessor(const json& j) {
    Preprocessor pre;
    pre.schema = decode_schema(j.at("schema"));
    pre.mode = normalization_mode_from_string(j.at("mode").get<std::string>());
    pre.image_impute = j.at("image_impute").get<std::vector<double>>();
    pre.mean = j.at("mean").get<std::vector<double>>();
    pre.spread = j.at("spread").get<std::vector<double>>();
    return pre;
}

ClassifierConfig decode_config(const json& j) {
    ClassifierConfig config;
    config.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
    config.seed = j.at("seed").get<std::uint64_t>();
    const json& forest = j.at("forest");
    config.forest.trees = forest.at("trees").get<std::size_t>();
    config.forest.features_per_split = forest.at("features_per_split").get<std::size_t>();
    config.forest.bootstrap = forest.at("bootstrap").get<bool>();
    config.forest.max_depth = forest.at("max_depth").get<std::size_t>();
    config.forest.min_leaf = forest.at("min_leaf").get<std::size_t>();
    const json& svm = j.at("svm");
    config.svm.lambda = svm.at("lambda").get<double>();
    config.svm.epochs = svm.at("epochs").get<std::size_t>();
    const json& logistic = j.at("logistic");
    config.logistic.lambda = logistic.at("lambda").get<double>();
    config.logistic.iterations = logistic.at("iterations").get<std::size_t>();
    config.logistic.step = logistic.at("step").get<double>();
    config.nb.smoothing_ratio = j.at("nb").at("smoothing_ratio").get<double>();
    return config;
}

Tree decode_tree(const json& j) {
    Tree tree;
    for (const json& n : j) {
        if (!n.is_array() || n.size() != 5) fail_corrupt("malformed tree node");
        TreeNode node;
        node.feature = n[0].get<std::int32_t>();
        node.threshold = n[1].get<double>();
        node.left = n[2].get<std::int32_t>();
        node.right = n[3].get<std::int32_t>();
        node.label = n[4].get<std::uint8_t>();
        if (node.label >= kNumClasses) fail_corrupt("tree leaf label out of range");
        auto count = static_cast<std::int64_t>(j.size());
        if (!node.is_leaf() &&
            (node.left < 0 || node.left >= count || node.right < 0 || node.right >= count))
            fail_corrupt("tree child index out of range");
        tree.nodes.push_back(node);
    }
    if (tree.nodes.empty()) fail_corrupt("empty tree");
    return tree;
}

template <typename Model>
void decode_linear_common(const json& j, Model& m) {
    m.weights = j.at("weights").get<std::array<std::vector<double>, kNumClasses>>();
    m.bias = j.at("bias").get<std::array<double, kNumClasses>>();
}

ClassifierParams decode_params(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "random_forest") {
        ForestModel m;
        for (const json& t : j.at("trees")) m.trees.push_back(decode_tree(t));
        return m;
    }
    if (kind == "linear_svm_ovr") {
        LinearOvrModel m;
        decode_linear_common(j, m);
        return m;
    }
    if (kind == "logistic_regression") {
        LogisticModel m;
        decode_linear_common(j, m);
        return m;
    }
    if (kind == "gaussian_nb") {
        GaussianNbModel m;
        m.log_prior = j.at("log_prior").get<std::array<double, kNumClasses>>();
        m.mean = j.at("mean").get<std::array<std::vector<double>, kNumClasses>>();
        m.variance = j.at("variance").get<std::array<std::vector<double>, kNumClasses>>();
        return m;
    }
    if (kind == "majority") {
        MajorityModel m;
        m.label = user_type_from_string(j.at("label").get<std::string>());
        m.shares = j.at("shares").get<std::array<double, kNumClasses>>();
        return m;
    }
    fail_corrupt("unknown classifier kind '" + kind + "'");
}

void check_consistency(const TrainedModel& model) {
    const std::size_t dim = model.preprocessor.schema.dimension();
    const Preprocessor& pre = model.preprocessor;
    if (pre.mean.size() != dim || pre.spread.size() != dim)
        fail_corrupt("preprocessor statistics disagree with the schema dimension");
    std::size_t image_dims =
        pre.schema.has(FeatureGroup::image) ? pre.schema.group_size(FeatureGroup::image) : 0;
    if (pre.image_impute.size() != image_dims)
        fail_corrupt("image imputation table disagrees with the schema");
    for (double s : pre.spread)
        if (!(s > 0.0)) fail_corrupt("non-positive spread");

    auto check_weights = [dim](const std::array<std::vector<double>, kNumClasses>& ws) {
        for (const std::vector<double>& w : ws)
            if (w.size() != dim) fail_corrupt("weight vector disagrees with the schema dimension");
    };
    if (const auto* svm = std::get_if<LinearOvrModel>(&model.params)) check_weights(svm->weights);
    if (const auto* lr = std::get_if<LogisticModel>(&model.params)) check_weights(lr->weights);
    if (const auto* nb = std::get_if<GaussianNbModel>(&model.params)) {
        check_weights(nb->mean);
        check_weights(nb->variance);
        for (const std::vector<double>& var : nb->variance)
            for (double v : var)
                if (!(v > 0.0)) fail_corrupt("non-positive class variance");
    }
}

}  // namespace

std::uint32_t crc32(std::string_view data) {
    static const std::array<std::uint32_t, 256> table = make_crc_table();
    std::uint32_t c = 0xffffffffu;
    for (unsigned char byte : data) c = table[(c ^ byte) & 0xffu] ^ (c >> 8);
    return c ^ 0xffffffffu;
}

std::string serialize_model_to_string(const TrainedModel& model) {
    std::string payload = encode_payload(model).dump();
    char checksum[9];
    std::snprintf(checksum, sizeof checksum, "%08x", crc32(payload));
    json artifact = {{"format", kFormatName},
                     {"format_version", model.format_version},
                     {"checksum", checksum},
                     {"payload", json::parse(payload)}};
    return artifact.dump();
}

void serialize_model(const TrainedModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelIoError(ModelIoError::Kind::io, "cannot open '" + path + "' for writing");
    out << serialize_model_to_string(model) << '\n';
    out.flush();
    if (!out) throw ModelIoError(ModelIoError::Kind::io, "failed writing '" + path + "'");
}

TrainedModel deserialize_model_from_string(const std::string& text) {
    json artifact = json::parse(text, nullptr, false);
    if (artifact.is_discarded() || !artifact.is_object()) fail_corrupt("not a JSON object");

    try {
        if (artifact.at("format").get<std::string>() != kFormatName)
            fail_corrupt("unrecognized format tag");
        auto version = artifact.at("format_version").get<std::uint32_t>();
        if (version != TrainedModel::kFormatVersion)
            throw ModelIoError(ModelIoError::Kind::version_mismatch,
                               "model format version " + std::to_string(version) +
                                   " is not supported (expected " +
                                   std::to_string(TrainedModel::kFormatVersion) + ")");
        const json& payload = artifact.at("payload");
        char expected[9];
        std::snprintf(expected, sizeof expected, "%08x", crc32(payload.dump()));
        if (artifact.at("checksum").get<std::string>() != expected)
            fail_corrupt("checksum mismatch");

        json class_order = json::array();
        for (UserType t : kClassOrder) class_order.push_back(to_string(t));
        if (payload.at("class_order") != class_order) fail_corrupt("unexpected class order");

        TrainedModel model;
        model.format_version = version;
        model.config = decode_config(payload.at("config"));
        model.name_options.theta = payload.at("name_options").at("theta").get<double>();
        model.name_options.strategy = name_strategy_from_string(
            payload.at("name_options").at("strategy").get<std::string>());
        model.preprocessor = decode_preprocessor(payload.at("preprocessor"));
        model.params = decode_params(payload.at("classifier"));
        check_consistency(model);
        return model;
    } catch (const json::exception& e) {
        fail_corrupt(e.what());
    } catch (const ConfigError& e) {
        // Unknown enum tokens inside the payload are corruption, not usage errors.
        fail_corrupt(e.what());
    }
}

TrainedModel deserialize_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelIoError(ModelIoError::Kind::io, "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw ModelIoError(ModelIoError::Kind::io, "failed reading '" + path + "'");
    return deserialize_model_from_string(buffer.str());
}

}  // namespace usertype
