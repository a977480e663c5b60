/** Trailing debouncer with latest-wins response handling.
 *
 * A burst of submissions inside the window collapses into a single request
 * fired after the window elapses, so the round-trip rate stays at most one
 * per window. Every sent request carries a sequence number; a response is
 * delivered only if no newer request has been sent since, so a slow stale
 * response can never overwrite a fresh one.
 */
export class LatestWins<Req, Res> {
  private timer: ReturnType<typeof setTimeout> | undefined;
  private pending: Req | undefined;
  private seq = 0;
  requestsSent = 0;

  constructor(
    private readonly send: (req: Req) => Promise<Res>,
    private readonly deliver: (res: Res, req: Req) => void,
    private readonly onError: (err: unknown) => void = () => {},
    private readonly windowMs = 250,
  ) {}

  submit(req: Req): void {
    this.pending = req;
    if (this.timer !== undefined) clearTimeout(this.timer);
    this.timer = setTimeout(() => this.fire(), this.windowMs);
  }

  /** Cancel the pending request, if any. */
  cancel(): void {
    if (this.timer !== undefined) clearTimeout(this.timer);
    this.timer = undefined;
    this.pending = undefined;
  }

  private fire(): void {
    this.timer = undefined;
    const req = this.pending as Req;
    this.pending = undefined;
    const mySeq = ++this.seq;
    this.requestsSent += 1;
    this.send(req).then(
      (res) => {
        if (mySeq === this.seq) this.deliver(res, req);
      },
      (err) => {
        if (mySeq === this.seq) this.onError(err);
      },
    );
  }
}
