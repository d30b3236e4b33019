#pragma once

#include "momliq/config.hpp"
#include "momliq/date.hpp"
#include "momliq/errors.hpp"
#include "momliq/panel.hpp"
#include "momliq/portfolio.hpp"
#include "momliq/report.hpp"
#include "momliq/signals.hpp"
#include "momliq/sorter.hpp"
#include "momliq/stats.hpp"
#include "momliq/synth.hpp"
#include "momliq/universe.hpp"
