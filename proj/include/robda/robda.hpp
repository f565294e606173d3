#ifndef ROBDA_ROBDA_HPP
#define ROBDA_ROBDA_HPP

#include "robda/chi2.hpp"
#include "robda/csv.hpp"
#include "robda/dataset.hpp"
#include "robda/diagnostics.hpp"
#include "robda/discriminant.hpp"
#include "robda/error.hpp"
#include "robda/estimators.hpp"
#include "robda/farness.hpp"
#include "robda/format.hpp"
#include "robda/key_value.hpp"
#include "robda/location_scatter.hpp"
#include "robda/mcd.hpp"
#include "robda/model_io.hpp"
#include "robda/plot_data.hpp"
#include "robda/plots.hpp"
#include "robda/svg.hpp"
#include "robda/synthetic.hpp"

#endif // ROBDA_ROBDA_HPP
