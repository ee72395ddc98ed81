#pragma once

#include "mcam/device.hpp"

namespace mcam {

// Two parallel FeFETs sharing output node D. A stored symbol s is written as
// F1 at level s+1 and F2 at level L-s, so F1 turns on only for larger query
// symbols and F2 only for smaller ones: D stays low iff query == stored.
struct MibCell {
    int bits = 0;
    int stored_symbol = 0;
    FefetInstance f1;
    FefetInstance f2;
};

// Gate voltages for one query symbol, referenced to the sourceline rail.
struct QueryDrive {
    int bits = 0;
    int symbol = 0;
    double gate_f1 = 0.0;  // V_WL(symbol+1) + V_SL
    double gate_f2 = 0.0;  // V_WL(L-symbol) + V_SL
    double v_sl = 0.0;
};

enum class DLevel { Low, High };

struct CellConduction {
    bool f1_on = false;
    bool f2_on = false;
};

MibCell encode_store(int symbol, const ThresholdLadder& ladder, VariationSampler* variation = nullptr);
QueryDrive encode_query(int symbol, const ThresholdLadder& ladder);

CellConduction conduction(const MibCell& cell, const QueryDrive& drive);
DLevel evaluate(const MibCell& cell, const QueryDrive& drive);

// Signed headroom of the worst device relative to the decision it should make
// for this (stored, query) pair: positive when every device lands on the
// correct side of its threshold.
double cell_margin(const MibCell& cell, const QueryDrive& drive);

}  // namespace mcam
