#include <fstream>
#include <iostream>
#include <memory>

#include "common.hpp"
#include "json.hpp"
#include "usertype/model_io.hpp"

namespace usertype::cli {

namespace {

struct ClassifyOptions {
    std::string model_path;
    std::string users_path = "-";  // "-" = stdin
    std::string name_db_path;
    std::string lexicon_path;
    std::string image_dir;
    std::string out_path;  // empty = stdout
};

void classify_stream(const ClassifyOptions& opt, std::istream& in, std::ostream& out) {
    TrainedModel model = deserialize_model(opt.model_path);
    const FeatureSchema& schema = model.preprocessor.schema;

    ResourceSet resources = load_resources(ResourceNeeds::for_schema(schema), opt.name_db_path,
                                           opt.lexicon_path, opt.image_dir);
    resources.name_options = model.name_options;
    FeatureExtractors extractors = resources.extractors();

    StreamStats stats = for_each_record(
        in,
        [&](UserRecord&& record, std::size_t) {
            Prediction p = predict(model, assemble(record, schema, extractors));
            nlohmann::json line = {
                {"user_id", record.user_id},
                {"label", to_string(p.label)},
                {"scores",
                 {{"male", p.scores[class_index(UserType::male)]},
                  {"female", p.scores[class_index(UserType::female)]},
                  {"organization", p.scores[class_index(UserType::organization)]}}}};
            out << line.dump() << '\n';
        },
        [](std::size_t line_number, const std::string& what) {
            std::cerr << "skipping line " << line_number << ": " << what << '\n';
        });

    if (!out) throw DataError("failed writing predictions");
    std::cerr << "classified " << stats.parsed << " record(s), skipped " << stats.skipped << '\n';
}

void run_classify(const ClassifyOptions& opt) {
    std::ifstream in_file;
    std::istream* in = &std::cin;
    if (opt.users_path != "-") {
        in_file.open(opt.users_path, std::ios::binary);
        if (!in_file) throw DataError("cannot open '" + opt.users_path + "'");
        in = &in_file;
    }
    if (opt.out_path.empty()) {
        classify_stream(opt, *in, std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + opt.out_path + "' for writing");
    classify_stream(opt, *in, out);
}

}  // namespace

void register_classify(CLI::App& app) {
    auto opt = std::make_shared<ClassifyOptions>();
    CLI::App* cmd = app.add_subcommand(
        "classify", "Stream records through a trained model, one JSON prediction per line");
    cmd->add_option("--model", opt->model_path, "Model artifact")->required();
    cmd->add_option("--users", opt->users_path, "Record stream ('-' = stdin)")
        ->capture_default_str();
    cmd->add_option("--name-db", opt->name_db_path, "Name frequency CSV (if the model uses names)");
    cmd->add_option("--lexicon", opt->lexicon_path, "Lexicon file (if the model uses text)");
    cmd->add_option("--image-dir", opt->image_dir, "Directory of image probability vectors");
    cmd->add_option("--out", opt->out_path, "Write predictions here instead of stdout");
    cmd->callback([opt] { run_classify(*opt); });
}

}  // namespace usertype::cli
