# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled order-statistic tree; mirrors ``_ordertree.OrderStatTree``.

Same implicit-key treap, same deterministic priority stream, so both
backends build identical tree shapes and report identical touched-node
counts for the same operation sequence.
"""

from cpython.mem cimport PyMem_Malloc, PyMem_Realloc, PyMem_Free

cdef extern from *:
    """
    #include <stdint.h>
    static inline uint64_t nsx_mix(uint64_t x) {
        uint64_t z = x + 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    """
    unsigned long long nsx_mix(unsigned long long x) nogil


cdef class OrderStatTree:
    cdef long* _left
    cdef long* _right
    cdef unsigned long long* _pri
    cdef long* _size
    cdef long* _ones
    cdef unsigned char* _color
    cdef long _cap
    cdef long _used
    cdef long _root
    cdef long* _free
    cdef long _nfree
    cdef long _freecap
    cdef unsigned long long _counter
    cdef public long long touched

    backend = "cython"

    def __cinit__(self):
        self._cap = 16
        self._left = <long*> PyMem_Malloc(self._cap * sizeof(long))
        self._right = <long*> PyMem_Malloc(self._cap * sizeof(long))
        self._pri = <unsigned long long*> PyMem_Malloc(self._cap * sizeof(unsigned long long))
        self._size = <long*> PyMem_Malloc(self._cap * sizeof(long))
        self._ones = <long*> PyMem_Malloc(self._cap * sizeof(long))
        self._color = <unsigned char*> PyMem_Malloc(self._cap * sizeof(unsigned char))
        if (self._left == NULL or self._right == NULL or self._pri == NULL
                or self._size == NULL or self._ones == NULL or self._color == NULL):
            raise MemoryError()
        self._left[0] = 0
        self._right[0] = 0
        self._pri[0] = 0
        self._size[0] = 0
        self._ones[0] = 0
        self._color[0] = 0
        self._used = 1
        self._root = 0
        self._freecap = 16
        self._free = <long*> PyMem_Malloc(self._freecap * sizeof(long))
        if self._free == NULL:
            raise MemoryError()
        self._nfree = 0
        self._counter = 0
        self.touched = 0

    def __dealloc__(self):
        PyMem_Free(self._left)
        PyMem_Free(self._right)
        PyMem_Free(self._pri)
        PyMem_Free(self._size)
        PyMem_Free(self._ones)
        PyMem_Free(self._color)
        PyMem_Free(self._free)

    cdef void _grow(self) except *:
        cdef long newcap = self._cap * 2
        self._left = <long*> PyMem_Realloc(self._left, newcap * sizeof(long))
        self._right = <long*> PyMem_Realloc(self._right, newcap * sizeof(long))
        self._pri = <unsigned long long*> PyMem_Realloc(self._pri, newcap * sizeof(unsigned long long))
        self._size = <long*> PyMem_Realloc(self._size, newcap * sizeof(long))
        self._ones = <long*> PyMem_Realloc(self._ones, newcap * sizeof(long))
        self._color = <unsigned char*> PyMem_Realloc(self._color, newcap * sizeof(unsigned char))
        if (self._left == NULL or self._right == NULL or self._pri == NULL
                or self._size == NULL or self._ones == NULL or self._color == NULL):
            raise MemoryError()
        self._cap = newcap

    cdef long _new_node(self, int color) except -1:
        cdef long x
        self._counter += 1
        cdef unsigned long long pri = nsx_mix(self._counter)
        if self._nfree > 0:
            self._nfree -= 1
            x = self._free[self._nfree]
        else:
            if self._used >= self._cap:
                self._grow()
            x = self._used
            self._used += 1
        self._left[x] = 0
        self._right[x] = 0
        self._pri[x] = pri
        self._size[x] = 1
        self._ones[x] = color
        self._color[x] = <unsigned char> color
        return x

    cdef inline void _pull(self, long t) nogil:
        cdef long l = self._left[t]
        cdef long r = self._right[t]
        self._size[t] = self._size[l] + self._size[r] + 1
        self._ones[t] = self._ones[l] + self._ones[r] + self._color[t]

    cdef void _split(self, long t, long k, long* a, long* b):
        cdef long x, y
        if t == 0:
            a[0] = 0
            b[0] = 0
            return
        self.touched += 1
        if self._size[self._left[t]] >= k:
            self._split(self._left[t], k, &x, &y)
            self._left[t] = y
            self._pull(t)
            a[0] = x
            b[0] = t
        else:
            self._split(self._right[t], k - self._size[self._left[t]] - 1, &x, &y)
            self._right[t] = x
            self._pull(t)
            a[0] = t
            b[0] = y

    cdef long _merge(self, long a, long b):
        if a == 0 or b == 0:
            return a if a != 0 else b
        self.touched += 1
        if self._pri[a] > self._pri[b]:
            self._right[a] = self._merge(self._right[a], b)
            self._pull(a)
            return a
        self._left[b] = self._merge(a, self._left[b])
        self._pull(b)
        return b

    def __len__(self):
        return self._size[self._root]

    def total(self, int color):
        if color == 1:
            return self._ones[self._root]
        return self._size[self._root] - self._ones[self._root]

    def reset_touched(self):
        self.touched = 0

    def insert(self, long pos, int color):
        if pos < 1 or pos > self._size[self._root] + 1:
            raise IndexError(f"insert position {pos} outside [1, {self._size[self._root] + 1}]")
        cdef long a, b, x
        self._split(self._root, pos - 1, &a, &b)
        x = self._new_node(color)
        self._root = self._merge(self._merge(a, x), b)

    def delete(self, long pos):
        if pos < 1 or pos > self._size[self._root]:
            raise IndexError(f"delete position {pos} outside [1, {self._size[self._root]}]")
        cdef long a, rest, mid, b
        self._split(self._root, pos - 1, &a, &rest)
        self._split(rest, 1, &mid, &b)
        cdef int color = self._color[mid]
        if self._nfree >= self._freecap:
            self._freecap *= 2
            self._free = <long*> PyMem_Realloc(self._free, self._freecap * sizeof(long))
            if self._free == NULL:
                raise MemoryError()
        self._free[self._nfree] = mid
        self._nfree += 1
        self._root = self._merge(a, b)
        return color

    def color_at(self, long pos):
        if pos < 1 or pos > self._size[self._root]:
            raise IndexError(f"position {pos} outside [1, {self._size[self._root]}]")
        cdef long t = self._root
        cdef long lsz
        while True:
            self.touched += 1
            lsz = self._size[self._left[t]]
            if pos <= lsz:
                t = self._left[t]
            elif pos == lsz + 1:
                return self._color[t]
            else:
                pos -= lsz + 1
                t = self._right[t]

    def prefix_count(self, long pos, int color):
        if pos <= 0:
            return 0
        cdef long n = self._size[self._root]
        if pos > n:
            pos = n
        cdef long t = self._root
        cdef long acc = 0
        cdef long l, lsz
        while pos > 0 and t != 0:
            self.touched += 1
            l = self._left[t]
            lsz = self._size[l]
            if pos <= lsz:
                t = l
            else:
                acc += self._ones[l] if color == 1 else lsz - self._ones[l]
                if self._color[t] == color:
                    acc += 1
                pos -= lsz + 1
                t = self._right[t]
        return acc

    def select_color(self, long rank, int color):
        cdef long tot = self._ones[self._root] if color == 1 else self._size[self._root] - self._ones[self._root]
        if rank < 1 or rank > tot:
            raise IndexError(f"rank {rank} outside [1, {tot}]")
        cdef long t = self._root
        cdef long pos = 0
        cdef long l, in_left
        while True:
            self.touched += 1
            l = self._left[t]
            in_left = self._ones[l] if color == 1 else self._size[l] - self._ones[l]
            if rank <= in_left:
                t = l
                continue
            rank -= in_left
            if self._color[t] == color and rank == 1:
                return pos + self._size[l] + 1
            if self._color[t] == color:
                rank -= 1
            pos += self._size[l] + 1
            t = self._right[t]

    def to_list(self):
        out = []
        stack = [(self._root, False)]
        cdef long t
        while stack:
            t, visited = stack.pop()
            if t == 0:
                continue
            if visited:
                out.append(self._color[t])
                stack.append((self._right[t], False))
            else:
                stack.append((t, True))
                stack.append((self._left[t], False))
        return out

    @classmethod
    def from_colors(cls, colors):
        colors = list(colors)
        cdef OrderStatTree tree = cls()
        cdef long n = len(colors)
        if n == 0:
            return tree
        cdef long* stack = <long*> PyMem_Malloc(n * sizeof(long))
        if stack == NULL:
            raise MemoryError()
        cdef long top = 0  # number of entries on the spine stack
        cdef long x, last
        cdef int c
        try:
            for c_obj in colors:
                c = c_obj
                x = tree._new_node(c)
                last = 0
                while top > 0 and tree._pri[stack[top - 1]] < tree._pri[x]:
                    top -= 1
                    last = stack[top]
                tree._left[x] = last
                if top > 0:
                    tree._right[stack[top - 1]] = x
                stack[top] = x
                top += 1
            tree._root = stack[0]
            tree._pull_all(tree._root)
        finally:
            PyMem_Free(stack)
        return tree

    cdef void _pull_all(self, long t):
        if t == 0:
            return
        self._pull_all(self._left[t])
        self._pull_all(self._right[t])
        self._pull(t)
