export interface Debounced<A extends unknown[]> {
  (...args: A): void;
  cancel(): void;
  flush(): void;
}

/**
 * Trailing-edge debounce: the wrapped function runs once, with the most
 * recent arguments, after calls have stopped for `waitMs`.
 */
export function debounce<A extends unknown[]>(fn: (...args: A) => void, waitMs: number): Debounced<A> {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let pending: A | null = null;

  const fire = (): void => {
    timer = null;
    if (pending !== null) {
      const args = pending;
      pending = null;
      fn(...args);
    }
  };

  const wrapped = (...args: A): void => {
    pending = args;
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(fire, waitMs);
  };

  wrapped.cancel = (): void => {
    if (timer !== null) clearTimeout(timer);
    timer = null;
    pending = null;
  };

  wrapped.flush = (): void => {
    if (timer !== null) {
      clearTimeout(timer);
      fire();
    }
  };

  return wrapped;
}
