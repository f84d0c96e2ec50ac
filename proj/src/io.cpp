#include "cycpuf/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <zlib.h>

#include "cycpuf/errors.hpp"

namespace cycpuf {

bool is_gz_path(const std::string &path)
{
	return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

namespace {

void write_gz(const std::string &path, const std::string &content)
{
	gzFile f = gzopen(path.c_str(), "wb");
	if (!f)
		throw IoError("cannot open " + path + " for writing");
	if (!content.empty() &&
	    gzwrite(f, content.data(), static_cast<unsigned>(content.size())) != static_cast<int>(content.size())) {
		gzclose(f);
		throw IoError("short gzip write to " + path);
	}
	if (gzclose(f) != Z_OK)
		throw IoError("gzip close failed for " + path);
}

void write_plain(const std::string &path, const std::string &content)
{
	std::ofstream out(path, std::ios::binary);
	if (!out)
		throw IoError("cannot open " + path + " for writing");
	out.write(content.data(), static_cast<std::streamsize>(content.size()));
	if (!out)
		throw IoError("short write to " + path);
}

} // namespace

void write_file_atomic(const std::string &path, const std::string &content)
{
	const std::string tmp = path + ".tmp";
	if (is_gz_path(path))
		write_gz(tmp, content);
	else
		write_plain(tmp, content);
	std::error_code ec;
	std::filesystem::rename(tmp, path, ec);
	if (ec) {
		std::filesystem::remove(tmp);
		throw IoError("rename " + tmp + " -> " + path + ": " + ec.message());
	}
}

std::string read_file(const std::string &path)
{
	if (is_gz_path(path)) {
		gzFile f = gzopen(path.c_str(), "rb");
		if (!f)
			throw IoError("cannot open " + path);
		std::string content;
		char buf[1 << 16];
		int n;
		while ((n = gzread(f, buf, sizeof(buf))) > 0)
			content.append(buf, static_cast<std::size_t>(n));
		bool bad = n < 0;
		gzclose(f);
		if (bad)
			throw IoError("gzip read error in " + path);
		return content;
	}
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw IoError("cannot open " + path);
	std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
	return content;
}

std::vector<std::string> split_lines(const std::string &content)
{
	std::vector<std::string> lines;
	std::size_t start = 0;
	while (start < content.size()) {
		std::size_t end = content.find('\n', start);
		if (end == std::string::npos)
			end = content.size();
		std::size_t len = end - start;
		if (len > 0 && content[start + len - 1] == '\r')
			--len;
		lines.emplace_back(content, start, len);
		start = end + 1;
	}
	return lines;
}

} // namespace cycpuf
