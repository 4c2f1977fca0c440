#pragma once

// Library umbrella header (the CLI front end lives in carlitz/cli.hpp).

#include "carlitz/errors.hpp"
#include "carlitz/rational.hpp"
#include "carlitz/field.hpp"
#include "carlitz/series.hpp"
#include "carlitz/quantities.hpp"
#include "carlitz/funcspace.hpp"
#include "carlitz/opring.hpp"
#include "carlitz/cauchy.hpp"
#include "carlitz/hyper.hpp"
#include "carlitz/random.hpp"
#include "carlitz/text.hpp"
