/**
 * api.ts — typed client for the classification service JSON API.
 *
 * The UI talks to the server exclusively through this module: two reads
 * (summary, unit detail) and two writes (classify, delete).
 */
/** status 0 means the request never reached the server. */
export class ApiError extends Error {
    status;
    constructor(status, message) {
        super(message);
        this.status = status;
        this.name = "ApiError";
    }
}
export class ApiClient {
    baseUrl;
    constructor(baseUrl = "") {
        this.baseUrl = baseUrl;
    }
    async request(path, init) {
        let response;
        try {
            response = await fetch(this.baseUrl + path, init);
        }
        catch (err) {
            throw new ApiError(0, `network failure: ${String(err)}`);
        }
        if (!response.ok) {
            let detail = `HTTP ${response.status}`;
            try {
                const body = (await response.json());
                if (typeof body.detail === "string") {
                    detail = body.detail;
                }
                else if (body.detail !== undefined) {
                    detail = JSON.stringify(body.detail);
                }
            }
            catch {
                // non-JSON error body; keep the status line
            }
            throw new ApiError(response.status, detail);
        }
        return (await response.json());
    }
    summary() {
        return this.request("/api/summary");
    }
    unit(unitId) {
        return this.request(`/api/units/${encodeURIComponent(unitId)}`);
    }
    classify(body) {
        return this.request("/api/classifications", {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        });
    }
    remove(unitId, active, passive) {
        const query = new URLSearchParams({ unit_id: unitId, active, passive });
        return this.request(`/api/classifications?${query}`, {
            method: "DELETE",
        });
    }
}
