#include <doctest.h>

#include <set>
#include <sstream>

#include "icenet/dataset.hpp"
#include "testutil.hpp"

using namespace icenet;

namespace {

std::string make_lines(int n, const std::string& prefix, int label) {
    std::ostringstream os;
    for (int i = 0; i < n; ++i)
        os << prefix << "h" << i << "\t" << prefix << "t" << i << "\t" << label << "\n";
    return os.str();
}

SplitDataset toy_dataset() {
    testutil::TempDir dir("ds");
    dir.file("train.tsv",
             "hot\tcold\tantonym\n"
             "hot\twarm\tsynonym\n"
             "big\tlarge\t0\n"
             "big\tsmall\t1\n"
             "fast\tquick\t0\n"
             "fast\tslow\t1\n");
    dir.file("dev.tsv", "old\tnew\t1\nold\tancient\t0\n");
    dir.file("test.tsv", "wide\tnarrow\t1\nwide\tbroad\t0\n");
    return load_dataset(dir.path.string(), "adjective");
}

}  // namespace

TEST_CASE("parses both label conventions") {
    auto ds = toy_dataset();
    CHECK(ds.train.size() == 6);
    CHECK(ds.dev.size() == 2);
    CHECK(ds.test.size() == 2);
    CHECK(ds.train[0].label == Relation::Antonym);
    CHECK(ds.train[1].label == Relation::Synonym);
    CHECK(ds.train[2].label == Relation::Synonym);
    CHECK(ds.word_class == "adjective");
    CHECK(ds.vocabulary.count("hot") == 1);
    CHECK(ds.vocabulary.count("narrow") == 1);  // test-split words included
}

TEST_CASE("three-line toy file") {
    testutil::TempDir dir("ds");
    auto path = dir.file("one.tsv", "a\tb\t0\nc\td\t1\na\td\t0\n");
    auto pairs = parse_pairs(path, Split::Train);
    CHECK(pairs.size() == 3);
    std::set<std::string> vocab;
    for (const auto& p : pairs) {
        vocab.insert(p.head);
        vocab.insert(p.tail);
    }
    CHECK(vocab.size() <= 6);
}

TEST_CASE("format errors carry line numbers") {
    testutil::TempDir dir("ds");
    auto bad = dir.file("bad.tsv", "a\tb\t0\nc\td\tmaybe\n");
    try {
        parse_pairs(bad, Split::Train);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_pairs(dir.file("empty.tsv", ""), Split::Train), FormatError);
}

TEST_CASE("duplicates are retained and counted") {
    testutil::TempDir dir("ds");
    dir.file("train.tsv", "a\tb\t0\na\tb\t0\nc\td\t1\n");
    dir.file("dev.tsv", "e\tf\t0\n");
    dir.file("test.tsv", "g\th\t1\n");
    auto ds = load_dataset(dir.path.string(), "other");
    CHECK(ds.train.size() == 3);
    CHECK(ds.duplicate_warnings == 1);
}

TEST_CASE("table-1-sized fixture loads with the expected split sizes") {
    testutil::TempDir dir("ds");
    dir.file("train.tsv", make_lines(2781, "a", 0) + make_lines(2781, "b", 1));
    dir.file("dev.tsv", make_lines(199, "c", 0) + make_lines(199, "d", 1));
    dir.file("test.tsv", make_lines(993, "e", 0) + make_lines(993, "f", 1));
    auto ds = load_dataset(dir.path.string(), "adjective");
    CHECK(ds.train.size() == 5562);
    CHECK(ds.dev.size() == 398);
    CHECK(ds.test.size() == 1986);
    auto [ant, syn] = ds.class_balance(Split::Train);
    CHECK(ant == 2781);
    CHECK(syn == 2781);
}

TEST_CASE("reload determinism") {
    testutil::TempDir dir("ds");
    dir.file("train.tsv", "a\tb\t0\nc\td\t1\n");
    dir.file("dev.tsv", "e\tf\t0\n");
    dir.file("test.tsv", "g\th\t1\n");
    auto d1 = load_dataset(dir.path.string(), "other");
    auto d2 = load_dataset(dir.path.string(), "other");
    CHECK(d1.vocabulary == d2.vocabulary);
    REQUIRE(d1.train.size() == d2.train.size());
    for (std::size_t i = 0; i < d1.train.size(); ++i) {
        CHECK(d1.train[i].head == d2.train[i].head);
        CHECK(d1.train[i].tail == d2.train[i].tail);
        CHECK(d1.train[i].label == d2.train[i].label);
    }
}

TEST_CASE("lexical split check") {
    testutil::TempDir dir("ds");
    dir.file("train.tsv", "a\tb\t0\n");
    dir.file("dev.tsv", "c\td\t0\n");
    dir.file("test.tsv", "e\tf\t1\n");
    CHECK(load_dataset(dir.path.string(), "other").lexical_split_holds());

    dir.file("test.tsv", "a\tf\t1\n");
    CHECK_FALSE(load_dataset(dir.path.string(), "other").lexical_split_holds());
}

TEST_CASE("negative sampling is deterministic and respects counts") {
    auto ds = toy_dataset();
    auto n1 = sample_negatives(ds, Relation::Synonym, 1, 7);
    auto n2 = sample_negatives(ds, Relation::Synonym, 1, 7);
    REQUIRE(n1.size() == 3);  // 3 synonym positives, k=1
    for (std::size_t i = 0; i < n1.size(); ++i) {
        CHECK(n1[i].head == n2[i].head);
        CHECK(n1[i].tail == n2[i].tail);
        CHECK(n1[i].kind == n2[i].kind);
    }
    CHECK(sample_negatives(ds, Relation::Antonym, 2, 7).size() == 6);
}

TEST_CASE("negatives never collide with same-relation positives") {
    auto ds = toy_dataset();
    std::set<std::pair<std::string, std::string>> syn_pos;
    for (const auto& p : ds.train)
        if (p.label == Relation::Synonym) syn_pos.insert({p.head, p.tail});
    int draws = 0;
    for (std::uint64_t seed = 0; draws < 10000; ++seed) {
        for (const auto& n : sample_negatives(ds, Relation::Synonym, 4, seed)) {
            CHECK(syn_pos.count({n.head, n.tail}) == 0);
            ++draws;
        }
    }
}

TEST_CASE("negative sampling error cases") {
    testutil::TempDir dir("ds");
    dir.file("train.tsv", "a\tb\t0\n");
    dir.file("dev.tsv", "a\tb\t0\n");
    dir.file("test.tsv", "a\tb\t0\n");
    auto tiny = load_dataset(dir.path.string(), "other");
    CHECK_THROWS_AS(sample_negatives(tiny, Relation::Synonym, 1, 0), SamplingError);

    auto ds = toy_dataset();
    CHECK_THROWS_AS(sample_negatives(ds, Relation::Synonym, 0, 0), ContractError);
}
