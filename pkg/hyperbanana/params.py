import click

from .analysis.rigidity import Classification, RankMode
from .constructions import EPlusLayout, Family


FAMILY_ERROR_INPUT_MESSAGE = "Permitted families are " + ", ".join(f.value for f in Family)
PAIR_ERROR_INPUT_MESSAGE = "Pairs are written as u-v and separated by commas, e.g. 0-1,2-5"
RANGE_ERROR_INPUT_MESSAGE = "Ranges are written as lo..hi (inclusive) or as a single integer"
SELF_PAIR_ERROR_INPUT_MESSAGE = "A pair needs two distinct vertices"

FAMILY_CHOICE = click.Choice([f.value for f in Family])
E_PLUS_CHOICE = click.Choice([layout.value for layout in EPlusLayout])
MODE_CHOICE = click.Choice([mode.value for mode in RankMode])
CLASSIFICATION_CHOICE = click.Choice([c.value for c in Classification])
OUTCOME_CHOICE = click.Choice(['pass', 'fail'])
TABLE_FAMILY_CHOICE = click.Choice(['odd', 'even'])


class PairListType(click.ParamType):
    """Comma-separated vertex pairs ``u-v``."""

    name = 'pairs'

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value
        pairs = []
        for token in value.split(','):
            token = token.strip()
            if not token:
                continue
            left, sep, right = token.partition('-')
            try:
                if not sep:
                    raise ValueError(token)
                pair = (int(left), int(right))
            except ValueError:
                self.fail(f'{PAIR_ERROR_INPUT_MESSAGE} (got {token!r})', param, ctx)
            if pair[0] == pair[1]:
                self.fail(f'{SELF_PAIR_ERROR_INPUT_MESSAGE} (got {token!r})', param, ctx)
            pairs.append(pair)
        return pairs


class RangeType(click.ParamType):
    """Inclusive integer range ``lo..hi``."""

    name = 'range'

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        lo, sep, hi = value.partition('..')
        try:
            lo = int(lo)
            hi = int(hi) if sep else lo
        except ValueError:
            self.fail(f'{RANGE_ERROR_INPUT_MESSAGE} (got {value!r})', param, ctx)
        if hi < lo:
            self.fail(f'Empty range {value!r}', param, ctx)
        return lo, hi


PAIR_LIST = PairListType()
RANGE = RangeType()
