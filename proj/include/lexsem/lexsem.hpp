#pragma once

#include "lexsem/analysis.hpp"
#include "lexsem/composer.hpp"
#include "lexsem/discourse.hpp"
#include "lexsem/error.hpp"
#include "lexsem/formula.hpp"
#include "lexsem/kernel.hpp"
#include "lexsem/lexicon.hpp"
#include "lexsem/logic.hpp"
#include "lexsem/model.hpp"
#include "lexsem/sexpr.hpp"
#include "lexsem/term.hpp"
#include "lexsem/type.hpp"
