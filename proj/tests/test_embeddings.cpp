#include <doctest.h>

#include <zlib.h>

#include "icenet/embeddings.hpp"
#include "testutil.hpp"

using namespace icenet;

TEST_CASE("loads the text format with a header") {
    testutil::TempDir dir("emb");
    auto path = dir.file("vec.txt", "2 3\na 1 0 0\nb 0 1 0\n");
    auto table = load_embeddings(path, 3);
    CHECK(table.vocab_size() == 2);
    CHECK(table.dim() == 3);
    CHECK(table.resolve("a", ResolveMode::Strict) == std::vector<double>{1, 0, 0});
    CHECK(table.skipped_lines == 0);
}

TEST_CASE("loads the headerless format") {
    testutil::TempDir dir("emb");
    auto path = dir.file("vec.txt", "a 1 0\nb 0 1\n");
    auto table = load_embeddings(path, 2);
    CHECK(table.vocab_size() == 2);
}

TEST_CASE("skips malformed lines with a count") {
    testutil::TempDir dir("emb");
    auto path = dir.file("vec.txt", "a 1 0\nb 0 1\nbroken 1\nc 1 1\nd 0.5 xyz\ne 2 2\n");
    auto table = load_embeddings(path, 2);
    CHECK(table.vocab_size() == 4);
    CHECK(table.skipped_lines == 2);
}

TEST_CASE("format errors") {
    testutil::TempDir dir("emb");
    CHECK_THROWS_AS(load_embeddings(dir.file("empty.txt", ""), 3), FormatError);
    CHECK_THROWS_AS(load_embeddings(dir.file("mismatch.txt", "1 5\na 1 2 3 4 5\n"), 3), FormatError);
    CHECK_THROWS_AS(load_embeddings(dir / "nonexistent.txt", 3), FormatError);
}

TEST_CASE("gzip-compressed files load identically") {
    testutil::TempDir dir("emb");
    std::string content = "2 2\na 0.25 -0.5\nb 1.5 2.5\n";
    auto plain = dir.file("vec.txt", content);
    auto gzpath = dir / "vec.txt.gz";
    gzFile gz = gzopen(gzpath.c_str(), "wb");
    REQUIRE(gz != nullptr);
    gzwrite(gz, content.data(), static_cast<unsigned>(content.size()));
    gzclose(gz);

    auto t1 = load_embeddings(plain, 2);
    auto t2 = load_embeddings(gzpath, 2);
    CHECK(t1.vocab_size() == t2.vocab_size());
    CHECK(t1.resolve("a", ResolveMode::Strict) == t2.resolve("a", ResolveMode::Strict));
    CHECK(t1.resolve("b", ResolveMode::Strict) == t2.resolve("b", ResolveMode::Strict));
}

TEST_CASE("loading the same file twice is deterministic") {
    testutil::TempDir dir("emb");
    auto path = dir.file("vec.txt", "a 0.125 -3\nb 7 0.0625\n");
    auto t1 = load_embeddings(path, 2);
    auto t2 = load_embeddings(path, 2);
    CHECK(t1.resolve("a", ResolveMode::Strict) == t2.resolve("a", ResolveMode::Strict));
    CHECK(t1.resolve("b", ResolveMode::Strict) == t2.resolve("b", ResolveMode::Strict));
}

TEST_CASE("strict mode rejects unknown words with the token") {
    EmbeddingTable table(3, 0);
    table.add("known", {1, 2, 3});
    CHECK(table.resolve("known", ResolveMode::Strict) == std::vector<double>{1, 2, 3});
    try {
        table.resolve("ghost", ResolveMode::Strict);
        FAIL("expected MissingWordError");
    } catch (const MissingWordError& e) {
        CHECK(e.word == "ghost");
    }
}

TEST_CASE("oov draws are cached, bounded, and seed-keyed") {
    EmbeddingTable t1(4, 42);
    auto first = t1.resolve("unknown", ResolveMode::OovRandom);
    auto second = t1.resolve("unknown", ResolveMode::OovRandom);
    CHECK(first == second);
    CHECK(first.size() == 4);
    for (double x : first) {
        CHECK(x >= -0.5 / 4);
        CHECK(x <= 0.5 / 4);
    }

    EmbeddingTable t2(4, 43);
    CHECK(t2.resolve("unknown", ResolveMode::OovRandom) != first);

    EmbeddingTable t3(4, 42);
    CHECK(t3.resolve("unknown", ResolveMode::OovRandom) == first);
}

TEST_CASE("prepopulate_oov fixes vectors ahead of lookups") {
    EmbeddingTable table(3, 9);
    table.prepopulate_oov({"x", "y"});
    auto x = table.resolve("x", ResolveMode::OovRandom);
    EmbeddingTable fresh(3, 9);
    CHECK(fresh.resolve("x", ResolveMode::OovRandom) == x);
}

TEST_CASE("random mode overrides stored rows through the oov stream") {
    EmbeddingTable table(3, 5);
    table.add("w", {9, 9, 9});
    table.set_random_mode(true);
    auto v = table.resolve("w", ResolveMode::OovRandom);
    CHECK(v != std::vector<double>{9, 9, 9});
    CHECK(table.resolve("w", ResolveMode::OovRandom) == v);
    table.set_random_mode(false);
    CHECK(table.resolve("w", ResolveMode::OovRandom) == std::vector<double>{9, 9, 9});
}

TEST_CASE("add rejects wrong widths") {
    EmbeddingTable table(3, 0);
    CHECK_THROWS_AS(table.add("w", {1, 2}), DimensionError);
}
