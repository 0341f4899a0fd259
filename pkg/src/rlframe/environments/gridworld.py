import numpy as np

from rlframe.environments.environment import FiniteMDP

UP, DOWN, LEFT, RIGHT = range(4)
_MOVES = {UP: (-1, 0), DOWN: (1, 0), LEFT: (0, -1), RIGHT: (0, 1)}


class GridWorld(FiniteMDP):
    """Deterministic grid with four moves.

    Cells are indexed row-major (``row * width + col``), row 0 at the top.
    Moving into the outer wall or an obstacle leaves the agent in place with
    reward ``bump_reward``; entering the goal yields ``goal_reward`` and is
    absorbing. ``goal=None`` builds a grid with no goal at all.
    """

    def __init__(self, height=5, width=5, start=(0, 0), goal='corner',
                 obstacles=(), goal_reward=10., bump_reward=-1., step_reward=0.,
                 gamma=0.9, horizon=100, seed=None):
        self.height = int(height)
        self.width = int(width)
        if goal == 'corner':
            goal = (self.height - 1, self.width - 1)
        self.start = tuple(start)
        self.goal = None if goal is None else tuple(goal)
        self.obstacles = {tuple(o) for o in obstacles}

        n = self.height * self.width
        p = np.zeros((n, 4, n))
        r = np.zeros((n, 4, n))
        terminal = np.zeros(n, dtype=bool)
        if self.goal is not None:
            terminal[self.cell_index(*self.goal)] = True
        for row in range(self.height):
            for col in range(self.width):
                s = self.cell_index(row, col)
                for a, (dr, dc) in _MOVES.items():
                    nr, nc = row + dr, col + dc
                    blocked = (not (0 <= nr < self.height and 0 <= nc < self.width)
                               or (nr, nc) in self.obstacles)
                    if blocked:
                        p[s, a, s] = 1.
                        r[s, a, s] = bump_reward
                    else:
                        ns = self.cell_index(nr, nc)
                        p[s, a, ns] = 1.
                        r[s, a, ns] = goal_reward if terminal[ns] else step_reward
        initial = np.zeros(n)
        initial[self.cell_index(*self.start)] = 1.
        super().__init__(p, r, terminal, initial, gamma, horizon, seed)

    def cell_index(self, row, col):
        return row * self.width + col

    def cell(self, index):
        return divmod(int(index), self.width)

    def render(self):
        rows = []
        here = None if self._state is None else self.cell(self._state[0])
        for row in range(self.height):
            line = ''
            for col in range(self.width):
                if (row, col) == here:
                    line += 'A'
                elif (row, col) == self.goal:
                    line += 'G'
                elif (row, col) in self.obstacles:
                    line += '#'
                else:
                    line += '.'
            rows.append(line)
        return '\n'.join(rows)
