import { rankRoutes } from "./api";
import type { FetchLike, RankReport, RankRequest } from "./api";

/**
 * Serializes rank queries so the newest one always wins.
 *
 * Issuing a query aborts any in-flight one, so at most a single request
 * is active at a time. Responses are additionally checked against a
 * sequence number: a reply that arrives for anything but the newest
 * query resolves to null instead of a report, even if the underlying
 * fetch implementation ignored the abort signal.
 */
export class RankClient {
  private seq = 0;
  private controller: AbortController | null = null;
  private active = 0;

  constructor(
    private readonly base: string,
    private readonly fetchImpl?: FetchLike,
  ) {}

  /** Number of requests currently awaited. Aborted ones leave on settle. */
  get inFlight(): number {
    return this.active;
  }

  /**
   * Run one rank query. Resolves with the report when this query is still
   * the newest, with null when it was superseded. Errors from a superseded
   * query are swallowed (the caller already moved on); errors from the
   * current one propagate.
   */
  async rank(request: RankRequest): Promise<RankReport | null> {
    const ticket = ++this.seq;
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    this.active += 1;
    try {
      const report = await rankRoutes(this.base, request, this.fetchImpl, controller.signal);
      return ticket === this.seq ? report : null;
    } catch (err) {
      if (ticket !== this.seq || controller.signal.aborted) {
        return null;
      }
      throw err;
    } finally {
      this.active -= 1;
      if (this.controller === controller) {
        this.controller = null;
      }
    }
  }
}
