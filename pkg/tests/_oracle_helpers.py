from epsnets import asymcore as ac
from epsnets import oracle

TAIL_START = oracle.DEFAULT_GRID[1] - oracle.DEFAULT_TAIL + 1


def grid_agrees(e, claimed) -> bool:
    """A proved sign agrees with the grid tail, or is certified only past the grid."""
    if not oracle.contradicts(int(claimed), e):
        return True
    return ac.sign_threshold(e) > TAIL_START
