import { describe, expect, it } from "vitest";

import { ServiceClient, ServiceError } from "../src/api.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

const PARAMS = {
  rho: 2100, mu: 7.5, tau0: 630, phi_n: 25, h_n: 7.5, v_p: 50, u_f: 40.5,
};

describe("service client", () => {
  it("posts predict bodies as-is and parses the response", async () => {
    const calls: { url: string; init?: RequestInit }[] = [];
    const client = new ServiceClient("http://svc", async (url, init) => {
      calls.push({ url, init });
      return jsonResponse(200, { format_version: 1, warnings: [] });
    });
    const doc = await client.predict({ params: PARAMS, layers: 2 });
    expect(calls).toHaveLength(1);
    expect(calls[0].url).toBe("http://svc/predict");
    expect(calls[0].init?.method).toBe("POST");
    const sent = JSON.parse(String(calls[0].init?.body));
    expect(sent.layers).toBe(2);
    expect(sent.params.tau0).toBe(630);
    expect(doc.format_version).toBe(1);
  });

  it("GETs /ranges and /health", async () => {
    const urls: string[] = [];
    const client = new ServiceClient("http://svc", async (url) => {
      urls.push(url);
      return jsonResponse(200, { parameters: {}, inputs: {} });
    });
    await client.ranges();
    await client.health();
    expect(urls).toEqual(["http://svc/ranges", "http://svc/health"]);
  });

  it("surfaces the service error message on HTTP failures", async () => {
    const client = new ServiceClient("http://svc", async () =>
      jsonResponse(422, { error: "inputs out of supported range", details: [] }),
    );
    const err = await client.predict({ params: PARAMS, layers: 1 })
      .catch((e) => e as ServiceError);
    expect(err).toBeInstanceOf(ServiceError);
    expect(err.kind).toBe("http");
    expect(err.status).toBe(422);
    expect(err.message).toBe("inputs out of supported range");
  });

  it("classifies network failures as unreachable", async () => {
    const client = new ServiceClient("http://svc", async () => {
      throw new TypeError("fetch failed");
    });
    const err = await client.ranges().catch((e) => e as ServiceError);
    expect(err).toBeInstanceOf(ServiceError);
    expect(err.kind).toBe("unreachable");
  });

  it("keeps the status text when the error body is not JSON", async () => {
    const client = new ServiceClient("http://svc", async () =>
      new Response("<html>oops</html>", { status: 502, statusText: "Bad Gateway" }),
    );
    const err = await client.health().catch((e) => e as ServiceError);
    expect(err.kind).toBe("http");
    expect(err.message).toBe("Bad Gateway");
  });
});
