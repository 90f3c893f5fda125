#include <random>
#include <sstream>
#include <unordered_map>

#include <benchmark/benchmark.h>

#include "usertype/classifiers.hpp"
#include "usertype/feature_assembly.hpp"
#include "usertype/record_io.hpp"
#include "usertype/rng.hpp"

namespace {

using namespace usertype;

const std::string kRecordLine =
    R"({"user_id":"42","screen_name":"Grace Hopper","handle":"ghopper","description":)"
    R"("rear admiral, computer scientist, teacher","tweet_text":)"
    R"("I look like an engineer and I wrote a compiler #ILookLikeAnEngineer",)"
    R"("friends_count":300,"followers_count":12000,"statuses_count":4500,)"
    R"("verified":true,"retweet_count":12,"favorite_count":40,"image_vector_ref":"42.vec"})";

class MemoryImages final : public ImageFeatureProvider {
public:
    std::unordered_map<std::string, std::vector<double>> vectors;

    ImageLookupResult lookup(const std::string& ref) const override {
        auto it = vectors.find(ref);
        if (it == vectors.end()) return {};
        return {ImageStatus::present, it->second};
    }
};

std::vector<double> one_hot_image(std::size_t hot) {
    std::vector<double> v(kImageDims, 0.0);
    v[hot % kImageDims] = 1.0;
    return v;
}

NameDatabase make_name_db() {
    std::istringstream in(
        "name,gender,frequency\n"
        "grace,F,120000\n"
        "grace,M,300\n"
        "alan,M,90000\n"
        "robin,F,40000\n"
        "robin,M,38000\n");
    return load_name_database_from(in, "bench");
}

LexiconDictionary make_lexicon() {
    std::istringstream in(
        "%\n"
        "1\tpronoun\n"
        "2\twork\n"
        "3\tposemo\n"
        "%\n"
        "i\t1\n"
        "engineer\t2\n"
        "compil*\t2\n"
        "like\t3\n"
        "wrote\t2\n");
    return load_lexicon_from(in, "bench");
}

struct Fixture {
    NameDatabase name_db = make_name_db();
    LexiconDictionary lexicon = make_lexicon();
    MemoryImages images;
    FeatureSchema schema = make_schema(FeatureSelection::all, lexicon.category_count());
    UserRecord record = parse_user_record(kRecordLine);

    Fixture() { images.vectors.emplace("42.vec", one_hot_image(420)); }

    FeatureExtractors extractors() const {
        return {&name_db, NameOptions{}, &lexicon, &images};
    }
};

const Fixture& fixture() {
    static Fixture f;
    return f;
}

/// Synthetic preprocessed dataset with class-dependent means, enough signal
/// for a forest worth timing.
std::pair<std::vector<std::vector<double>>, std::vector<UserType>> make_training_data(
    std::size_t n, std::size_t dim) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<std::vector<double>> rows;
    std::vector<UserType> labels;
    for (std::size_t i = 0; i < n; ++i) {
        UserType label = kClassOrder[i % kNumClasses];
        std::vector<double> row(dim);
        for (std::size_t d = 0; d < dim; ++d)
            row[d] = noise(rng) + (d % kNumClasses == class_index(label) ? 1.5 : 0.0);
        rows.push_back(std::move(row));
        labels.push_back(label);
    }
    return {std::move(rows), std::move(labels)};
}

void BM_parse_record(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(parse_user_record(kRecordLine));
}
BENCHMARK(BM_parse_record);

void BM_tokenize(benchmark::State& state) {
    const std::string& text = fixture().record.tweet_text;
    for (auto _ : state) benchmark::DoNotOptimize(tokenize(text));
}
BENCHMARK(BM_tokenize);

void BM_category_profile(benchmark::State& state) {
    auto tokens = tokenize(fixture().record.tweet_text);
    for (auto _ : state) benchmark::DoNotOptimize(category_profile(tokens, fixture().lexicon));
}
BENCHMARK(BM_category_profile);

void BM_assemble(benchmark::State& state) {
    const Fixture& f = fixture();
    FeatureExtractors ex = f.extractors();
    for (auto _ : state) benchmark::DoNotOptimize(assemble(f.record, f.schema, ex));
}
BENCHMARK(BM_assemble);

void BM_classify_record(benchmark::State& state) {
    const Fixture& f = fixture();
    MemoryImages images = f.images;
    FeatureExtractors ex = f.extractors();
    ex.images = &images;

    std::vector<FeatureVector> vectors;
    std::mt19937_64 rng(11);
    for (int i = 0; i < 24; ++i) {
        UserRecord r = f.record;
        r.user_id = std::to_string(i);
        r.friends_count = static_cast<std::int64_t>(bounded(rng, 5000));
        r.followers_count = static_cast<std::int64_t>(bounded(rng, 50000));
        // Most training records carry an image, a few exercise imputation.
        if (i % 4 != 3) {
            r.image_vector_ref = r.user_id + ".vec";
            images.vectors.emplace(*r.image_vector_ref, one_hot_image(400 + bounded(rng, 40)));
        } else {
            r.image_vector_ref.reset();
        }
        vectors.push_back(assemble(r, f.schema, ex));
    }
    std::vector<UserType> labels;
    for (int i = 0; i < 24; ++i) labels.push_back(kClassOrder[i % kNumClasses]);

    TrainedModel model;
    model.config.algorithm = Algorithm::random_forest;
    model.config.forest.trees = 30;
    model.preprocessor = fit_preprocessor(vectors, f.schema);
    std::vector<std::vector<double>> rows;
    for (const FeatureVector& v : vectors) rows.push_back(apply_preprocessor(model.preprocessor, v));
    model.params = train_classifier(model.config, rows, labels);

    for (auto _ : state) {
        FeatureVector v = assemble(f.record, f.schema, ex);
        benchmark::DoNotOptimize(predict(model, v));
    }
}
BENCHMARK(BM_classify_record);

void BM_train_forest(benchmark::State& state) {
    auto [rows, labels] = make_training_data(static_cast<std::size_t>(state.range(0)), 60);
    ClassifierConfig config;
    config.forest.trees = 20;
    for (auto _ : state) benchmark::DoNotOptimize(train_classifier(config, rows, labels));
}
BENCHMARK(BM_train_forest)->Arg(90)->Arg(300);

}  // namespace

BENCHMARK_MAIN();
