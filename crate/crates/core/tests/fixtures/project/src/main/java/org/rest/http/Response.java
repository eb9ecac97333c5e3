package org.rest.http;

import java.nio.charset.Charset;
import org.rest.codec.CharsetDetector;

public class Response {
    private final int status;
    private final Headers headers;
    private final byte[] rawBody;

    public Response(int status, Headers headers, byte[] rawBody) {
        this.status = status;
        this.headers = headers;
        this.rawBody = rawBody;
    }

    public int getStatus() {
        return status;
    }

    public boolean isSuccessful() {
        return status >= 200 && status < 300;
    }

    public Headers getHeaders() {
        return headers;
    }

    public byte[] getRawBody() {
        return rawBody;
    }

    // Decodes the body text using the charset named in Content-Type.
    public String bodyAsString() {
        Charset charset = CharsetDetector.fromContentType(headers.get("Content-Type"));
        return new String(rawBody, charset);
    }

    public Response withBody(byte[] decoded) {
        Headers copy = headers.copy();
        copy.remove("Content-Encoding");
        copy.set("Content-Length", Integer.toString(decoded.length));
        return new Response(status, copy, decoded);
    }
}
