#include <doctest.h>

#include <random>
#include <sstream>
#include <vector>

#include "mcam/array.hpp"
#include "mcam/error.hpp"

using namespace mcam;

namespace {

using Word = std::vector<int>;

// Stage-by-stage NAND reference working on symbols only. prev holds
// ML_1..ML_N of every row from the last search; ML_0 is always high.
struct NandReference {
    std::size_t rows, cols;
    std::vector<std::vector<bool>> prev;

    NandReference(std::size_t r, std::size_t c) : rows(r), cols(c), prev(r, std::vector<bool>(c, false)) {}

    // Returns per-row charge events.
    std::vector<int> step(const std::vector<Word>& stored, const Word& query) {
        std::vector<int> events(rows, 0);
        for (std::size_t r = 0; r < rows; ++r) {
            std::vector<bool> now(cols);
            bool prefix = true;
            for (std::size_t i = 0; i < cols; ++i) {
                prefix = prefix && stored[r][i] == query[i];
                now[i] = prefix;
            }
            // Stage i+1 (i >= 1) is supplied by ML_i.
            for (std::size_t i = 0; i + 1 < cols; ++i)
                if (!prev[r][i] && now[i]) ++events[r];
            prev[r] = now;
        }
        return events;
    }
};

Word random_word(std::mt19937_64& rng, std::size_t n, int levels) {
    std::uniform_int_distribution<int> sym(0, levels - 1);
    Word w(n);
    for (auto& s : w) s = sym(rng);
    return w;
}

}  // namespace

TEST_CASE("topology names") {
    CHECK(parse_topology("nor") == Topology::nor_1t);
    CHECK(parse_topology("nand") == Topology::nand_2t);
    CHECK(std::string(to_string(Topology::nand_2t)) == "nand");
    CHECK_THROWS_AS(parse_topology("tcam"), Error);
}

TEST_CASE("NOR and NAND agree with symbol comparison on random instances") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> geom(1, 24), bits_d(1, 3), coin(0, 3);
    for (int trial = 0; trial < 300; ++trial) {
        const int bits = bits_d(rng);
        const int L = 1 << bits;
        const std::size_t rows = geom(rng), cols = geom(rng);
        const ThresholdLadder l = build_ladder(bits, 0.4, 2.5);
        CamArray nor(Topology::nor_1t, l, rows, cols), nand(Topology::nand_2t, l, rows, cols);
        std::vector<Word> stored;
        const Word query = random_word(rng, cols, L);
        for (std::size_t r = 0; r < rows; ++r) {
            // Bias towards near-matches so both outcomes show up.
            Word w = coin(rng) == 0 ? random_word(rng, cols, L) : query;
            if (coin(rng) == 1) w[rng() % cols] = static_cast<int>(rng() % L);
            nor.write_word(r, w);
            nand.write_word(r, w);
            stored.push_back(w);
        }
        const SearchReport a = search(nor, query), b = search(nand, query);
        for (std::size_t r = 0; r < rows; ++r) {
            const bool expected = stored[r] == query;
            CHECK(bool(a.match[r]) == expected);
            CHECK(bool(b.match[r]) == expected);
            int same = 0;
            for (std::size_t i = 0; i < cols; ++i) same += stored[r][i] == query[i];
            CHECK(a.match_count[r] == same);
            CHECK(b.match_count[r] == same);
            CHECK(a.conducting_cells[r] == static_cast<int>(cols) - same);
        }
    }
}

TEST_CASE("NAND charge events follow the stage-by-stage reference") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const int bits = 1 + trial % 3;
        const int L = 1 << bits;
        const std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 10;
        const ThresholdLadder l = build_ladder(bits, 0.4, 2.5);
        CamArray a(Topology::nand_2t, l, rows, cols);
        std::vector<Word> stored;
        for (std::size_t r = 0; r < rows; ++r) {
            stored.push_back(random_word(rng, cols, L));
            a.write_word(r, stored.back());
        }
        NandReference ref(rows, cols);
        Word q = stored[0];
        for (int s = 0; s < 8; ++s) {
            // Mutate a suffix so prefixes match often.
            if (s > 0) q[rng() % cols] = static_cast<int>(rng() % L);
            const SearchReport rep = search(a, q);
            const std::vector<int> expect = ref.step(stored, q);
            std::int64_t total = 0;
            for (std::size_t r = 0; r < rows; ++r) {
                CHECK(rep.row_precharge_events[r] == expect[r]);
                total += expect[r];
            }
            CHECK(rep.precharge_events == total);
        }
    }
}

TEST_CASE("NAND repeated identical query needs no charge") {
    std::mt19937_64 rng(3);
    const ThresholdLadder l = default_ladder();
    CamArray a(Topology::nand_2t, l, 16, 32);
    for (std::size_t r = 0; r < 16; ++r) a.write_word(r, random_word(rng, 32, 8));
    const Word q = a.read_word(5);
    search(a, q);
    const SearchReport again = search(a, q);
    CHECK(again.precharge_events == 0);
    CHECK(again.match[5] == 1);
}

TEST_CASE("NAND first stage never charges") {
    const ThresholdLadder l = default_ladder();
    CamArray a(Topology::nand_2t, l, 1, 1);
    a.write_word(0, Word{3});
    CHECK(search(a, Word{3}).precharge_events == 0);
    CHECK(search(a, Word{4}).precharge_events == 0);

    CamArray b(Topology::nand_2t, l, 1, 3);
    b.write_word(0, Word{1, 2, 3});
    // Fresh stages are low: ML_1 and ML_2 rise, charging stages 2 and 3.
    CHECK(search(b, Word{1, 2, 3}).precharge_events == 2);
    CHECK(search(b, Word{1, 5, 3}).precharge_events == 0);
    CHECK(search(b, Word{1, 2, 0}).precharge_events == 1);
}

TEST_CASE("NOR precharges only rows discharged by the previous search") {
    const ThresholdLadder l = default_ladder();
    CamArray a(Topology::nor_1t, l, 3, 2);
    a.write_word(0, Word{1, 1});
    a.write_word(1, Word{2, 2});
    a.write_word(2, Word{1, 1});
    const SearchReport first = search(a, Word{1, 1});
    CHECK(first.precharge_events == 3);  // fresh array
    CHECK(first.discharge_events == 1);
    const SearchReport second = search(a, Word{2, 2});
    CHECK(second.precharge_events == 1);
    CHECK(second.discharge_events == 2);
    CHECK(second.row_precharge_events == std::vector<int>{0, 1, 0});
    a.ml_state().reset();
    CHECK(search(a, Word{2, 2}).precharge_events == 3);
}

TEST_CASE("shared array with per-worker state matches the owning search") {
    std::mt19937_64 rng(8);
    const ThresholdLadder l = default_ladder();
    for (Topology t : {Topology::nor_1t, Topology::nand_2t}) {
        CamArray a(t, l, 6, 9);
        for (std::size_t r = 0; r < 6; ++r) a.write_word(r, random_word(rng, 9, 8));
        const CamArray& shared = a;
        MatchlineState mine(6, 9);
        for (int s = 0; s < 5; ++s) {
            const Word q = s % 2 ? a.read_word(s) : random_word(rng, 9, 8);
            const SearchReport x = t == Topology::nor_1t ? search_nor(shared, mine, q) : search_nand(shared, mine, q);
            const SearchReport y = search(a, q);
            CHECK(x.match == y.match);
            CHECK(x.row_precharge_events == y.row_precharge_events);
        }
    }
}

TEST_CASE("writing a row leaves other rows untouched") {
    const ThresholdLadder l = default_ladder();
    CamArray a(Topology::nor_1t, l, 4, 5);
    VariationSampler v({0.05, 1});
    for (std::size_t r = 0; r < 4; ++r) a.write_word(r, Word{1, 2, 3, 4, 5}, &v);
    std::vector<MibCell> before;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 5; ++c) before.push_back(a.cell(r, c));
    a.write_word(2, Word{7, 7, 7, 7, 7}, &v);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 5; ++c) {
            const MibCell& now = a.cell(r, c);
            const MibCell& old = before[r * 5 + c];
            if (r == 2) {
                CHECK(now.stored_symbol == 7);
            } else {
                CHECK(now.stored_symbol == old.stored_symbol);
                CHECK(now.f1.effective_vth == old.f1.effective_vth);
                CHECK(now.f2.effective_vth == old.f2.effective_vth);
            }
        }
    // A rejected write must not change the row either.
    CHECK_THROWS_AS(a.write_word(1, Word{1, 2, 3, 4, 9}), Error);
    CHECK(a.read_word(1) == Word{1, 2, 3, 4, 5});
}

TEST_CASE("array errors") {
    const ThresholdLadder l = default_ladder();
    auto code = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::io_error;
    };
    CHECK(code([&] { CamArray(Topology::nor_1t, l, 0, 4); }) == Errc::invalid_geometry);
    CHECK(code([&] { CamArray(Topology::nor_1t, l, 4, 0); }) == Errc::invalid_geometry);
    CamArray a(Topology::nor_1t, l, 2, 3);
    CHECK(code([&] { a.write_word(2, Word{0, 0, 0}); }) == Errc::row_out_of_range);
    CHECK(code([&] { a.write_word(0, Word{0, 0}); }) == Errc::length_mismatch);
    CHECK(code([&] { search(a, Word{0, 0}); }) == Errc::length_mismatch);
    CHECK(code([&] { search(a, Word{0, 0, 8}); }) == Errc::symbol_out_of_range);
    CHECK(code([&] { search_nand(a, Word{0, 0, 0}); }) == Errc::topology_mismatch);
}

TEST_CASE("contents CSV round trip") {
    std::mt19937_64 rng(4);
    const ThresholdLadder l = default_ladder();
    CamArray a(Topology::nor_1t, l, 5, 7);
    for (std::size_t r = 0; r < 5; ++r) a.write_word(r, random_word(rng, 7, 8));
    std::stringstream io;
    write_contents_csv(io, a);
    const auto words = read_contents_csv(io);
    REQUIRE(words.size() == 5);
    for (std::size_t r = 0; r < 5; ++r) CHECK(words[r] == a.read_word(r));

    std::istringstream bad("1,2,x\n");
    CHECK_THROWS_AS(read_contents_csv(bad), Error);
}

TEST_CASE("event totals accumulate and merge") {
    const ThresholdLadder l = default_ladder();
    CamArray a(Topology::nor_1t, l, 2, 2);
    EventTotals t1, t2;
    t1.add(search(a, Word{0, 0}));
    t2.add(search(a, Word{1, 0}));
    t2.add(search(a, Word{1, 0}));
    t1.merge(t2);
    CHECK(t1.searches == 3);
    CHECK(t1.precharge_events == 2 + 0 + 2);
    CHECK(t1.discharge_events == 4);
    CHECK(t1.conducting_cells == 4);
}
