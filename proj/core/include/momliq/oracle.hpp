#pragma once

#include "momliq/portfolio.hpp"

namespace momliq::oracle {

/// Brute-force reference for run_backtest. Recomputes eligibility, signals
/// and ranks from raw records at every rebalance and books the portfolio as
/// explicit unit positions plus cash, valued day by day. It shares no
/// computation with the engine beyond record lookup, and is meant for small
/// panels only (tens of assets, a few hundred days).
BacktestResult oracle_backtest(const Panel& panel, const PortfolioSpec& spec, const InclusionCriteria& criteria,
                               const SignalConfig& cfg, Date start, Date end);

}  // namespace momliq::oracle
