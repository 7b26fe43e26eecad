"""Block partitioning of matrices over GF(q)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndivisibleDimensions


@dataclass(frozen=True, eq=False)
class BlockMatrix:
    """A matrix stored as a row-major grid of equally sized blocks.

    ``blocks`` has shape ``(grid_rows, grid_cols, block_rows, block_cols)``.
    """

    blocks: np.ndarray

    @property
    def grid(self) -> tuple[int, int]:
        return self.blocks.shape[0], self.blocks.shape[1]

    @property
    def block_shape(self) -> tuple[int, int]:
        return self.blocks.shape[2], self.blocks.shape[3]

    @property
    def shape(self) -> tuple[int, int]:
        (gr, gc), (br, bc) = self.grid, self.block_shape
        return gr * br, gc * bc

    def __getitem__(self, idx: tuple[int, int]) -> np.ndarray:
        return self.blocks[idx[0], idx[1]]

    def to_matrix(self) -> np.ndarray:
        gr, gc, br, bc = self.blocks.shape
        return self.blocks.transpose(0, 2, 1, 3).reshape(gr * br, gc * bc)

    @classmethod
    def from_grid(cls, grid: list[list[np.ndarray]]) -> "BlockMatrix":
        rows = len(grid)
        cols = len(grid[0])
        br, bc = grid[0][0].shape
        out = np.empty((rows, cols, br, bc), dtype=object)
        for j in range(rows):
            for k in range(cols):
                if grid[j][k].shape != (br, bc):
                    raise IndivisibleDimensions("blocks in a grid must share one shape")
                out[j, k] = grid[j][k]
        return cls(out)


def partition(matrix: np.ndarray, block_rows: int, block_cols: int) -> BlockMatrix:
    """Split ``matrix`` into a ``block_rows x block_cols`` grid. No implicit padding."""
    rows, cols = matrix.shape
    if block_rows < 1 or block_cols < 1:
        raise IndivisibleDimensions("grid dimensions must be positive")
    if rows % block_rows or cols % block_cols:
        raise IndivisibleDimensions(
            f"{rows}x{cols} matrix cannot be split into a {block_rows}x{block_cols} grid"
        )
    br, bc = rows // block_rows, cols // block_cols
    blocks = np.asarray(matrix, dtype=object).reshape(block_rows, br, block_cols, bc)
    return BlockMatrix(blocks.transpose(0, 2, 1, 3).copy())


def pad_to(matrix: np.ndarray, block_rows: int, block_cols: int) -> tuple[np.ndarray, tuple[int, int]]:
    """Zero-pad so both dimensions divide evenly; returns the padded matrix and original shape."""
    rows, cols = matrix.shape
    new_rows = -(-rows // block_rows) * block_rows
    new_cols = -(-cols // block_cols) * block_cols
    out = np.zeros((new_rows, new_cols), dtype=object)
    out[:rows, :cols] = matrix
    return out, (rows, cols)


def unpad(matrix: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    return matrix[: shape[0], : shape[1]]
