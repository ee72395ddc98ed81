#include "mcam/mibo.hpp"

#include <algorithm>
#include <string>

#include "mcam/error.hpp"

namespace mcam {

namespace {

void check_symbol(int symbol, const ThresholdLadder& ladder) {
    if (symbol < 0 || symbol >= ladder.level_count())
        throw Error(Errc::symbol_out_of_range,
                    "symbol " + std::to_string(symbol) + " not in 0.." + std::to_string(ladder.level_count() - 1));
}

void check_widths(const MibCell& cell, const QueryDrive& drive) {
    if (cell.bits != drive.bits)
        throw Error(Errc::width_mismatch,
                    "cell has " + std::to_string(cell.bits) + " bits, query has " + std::to_string(drive.bits));
}

}  // namespace

MibCell encode_store(int symbol, const ThresholdLadder& ladder, VariationSampler* variation) {
    check_symbol(symbol, ladder);
    const int levels = ladder.level_count();
    MibCell cell;
    cell.bits = ladder.bits;
    cell.stored_symbol = symbol;
    cell.f1 = program(ladder, symbol + 1, variation);
    cell.f2 = program(ladder, levels - symbol, variation);
    return cell;
}

QueryDrive encode_query(int symbol, const ThresholdLadder& ladder) {
    check_symbol(symbol, ladder);
    const int levels = ladder.level_count();
    QueryDrive drive;
    drive.bits = ladder.bits;
    drive.symbol = symbol;
    drive.v_sl = ladder.v_sl;
    drive.gate_f1 = ladder.wl(symbol + 1) + ladder.v_sl;
    drive.gate_f2 = ladder.wl(levels - symbol) + ladder.v_sl;
    return drive;
}

CellConduction conduction(const MibCell& cell, const QueryDrive& drive) {
    check_widths(cell, drive);
    return {conducts(cell.f1, drive.gate_f1 - drive.v_sl), conducts(cell.f2, drive.gate_f2 - drive.v_sl)};
}

DLevel evaluate(const MibCell& cell, const QueryDrive& drive) {
    const CellConduction c = conduction(cell, drive);
    return (c.f1_on || c.f2_on) ? DLevel::High : DLevel::Low;
}

double cell_margin(const MibCell& cell, const QueryDrive& drive) {
    check_widths(cell, drive);
    const double vgs1 = drive.gate_f1 - drive.v_sl;
    const double vgs2 = drive.gate_f2 - drive.v_sl;
    const bool f1_should_conduct = drive.symbol > cell.stored_symbol;
    const bool f2_should_conduct = drive.symbol < cell.stored_symbol;
    const double m1 = f1_should_conduct ? vgs1 - cell.f1.effective_vth : cell.f1.effective_vth - vgs1;
    const double m2 = f2_should_conduct ? vgs2 - cell.f2.effective_vth : cell.f2.effective_vth - vgs2;
    return std::min(m1, m2);
}

}  // namespace mcam
